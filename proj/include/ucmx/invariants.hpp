// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ucmx/model.hpp"
#include "ucmx/order.hpp"

namespace ucmx {

/// Covering pairs (e1, e2) of message-relevant events in different instances
/// that no message from instance(e1) to instance(e2) sits between. A pair is
/// covering when no other message-relevant event lies strictly between the
/// two. Empty for a document whose messages carry all cross-instance
/// causality.
inline std::vector<std::pair<std::string, std::string>> causality_violations(const Node& body) {
  PartialOrder po(body);
  std::vector<std::size_t> events, messages;
  for (std::size_t i = 0; i < po.size(); ++i) {
    if (auto* d = po.leaf(i).get<Do>(); d && is_message_relevant(d->kind)) events.push_back(i);
    if (po.leaf(i).is<Message>()) messages.push_back(i);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (auto a : events) {
    for (auto b : events) {
      if (!po.before(a, b)) continue;
      const std::string ia = owner_of(po.leaf(a).as<Do>());
      const std::string ib = owner_of(po.leaf(b).as<Do>());
      if (ia == ib) continue;
      bool covering = true;
      for (auto x : events)
        if (po.before(a, x) && po.before(x, b)) covering = false;
      if (!covering) continue;
      bool carried = false;
      for (auto m : messages) {
        const auto& msg = po.leaf(m).as<Message>();
        if (msg.source_id == ia && msg.destination_id == ib && po.before(a, m) && po.before(m, b)) carried = true;
      }
      if (!carried) out.emplace_back(po.id(a), po.id(b));
    }
  }
  return out;
}

/// Human-readable invariant diagnostics for a document; empty when clean.
inline std::vector<std::string> document_diagnostics(const ScenarioDocument& doc) {
  std::vector<std::string> out;
  try {
    validate_structure(doc);
  } catch (const Error& e) {
    out.push_back(e.what());
    return out;
  }
  std::set<std::string> ids;
  bool enriched = false;
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (auto* m = n.get<Message>()) {
        enriched = true;
        if (!ids.insert(m->id).second) out.push_back("duplicate message id '" + m->id + "'");
        if (m->source_id == m->destination_id && m->is_connector)
          out.push_back("connector message '" + m->id + "' is a self-message");
      }
    });
  });
  if (!enriched) return out;
  doc.for_each_scenario([&](const Scenario& s) {
    for (const auto& [a, b] : causality_violations(s.body))
      out.push_back("scenario '" + s.name + "': no message carries causality from '" + a + "' to '" + b + "'");
  });
  return out;
}

}  // namespace ucmx
