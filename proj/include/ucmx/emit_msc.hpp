// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucmx/model.hpp"
#include "ucmx/synthesis.hpp"

namespace ucmx {

struct MscOptions {
  MappingConfig mapping;
  bool suppress_waiting_places = false;
};

namespace detail {

inline constexpr const char* kMscStage = "emit-msc";

/// Unique, identifier-safe names for a list of raw names, in order.
inline std::vector<std::string> unique_identifiers(const std::vector<std::string>& raw, std::string_view fallback) {
  std::vector<std::string> out;
  std::set<std::string> used;
  for (const auto& r : raw) {
    std::string base = sanitize(r);
    if (base.empty()) base = std::string(fallback);
    std::string name = base;
    for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
    used.insert(name);
    out.push_back(name);
  }
  return out;
}

/// Message names keep a trailing parameter list; the base is sanitized.
inline std::string msc_message_name(const std::string& name) {
  auto open = name.find('(');
  if (open != std::string::npos && name.back() == ')' && name.find(')') == name.size() - 1) {
    std::string base = sanitize(name.substr(0, open));
    return (base.empty() ? "m" : base) + name.substr(open);
  }
  std::string s = sanitize(name);
  return s.empty() ? "m" : s;
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out + "'";
}

class MscEmitter {
 public:
  MscEmitter(const ScenarioDocument& doc, const MscOptions& opt) : doc_(doc), opt_(opt) {
    std::vector<std::string> raw;
    for (const auto& i : doc.instances) {
      ids_.push_back(i.id);
      raw.push_back(i.name);
    }
    if (needs_env() && !doc.find_instance(kEnvId)) {
      ids_.push_back(std::string(kEnvId));
      raw.push_back(std::string(kEnvName));
    }
    auto names = unique_identifiers(raw, "I");
    for (std::size_t k = 0; k < ids_.size(); ++k) name_of_[ids_[k]] = names[k];
  }

  std::string emit() {
    std::vector<std::string> raw;
    doc_.for_each_scenario([&](const Scenario& s) { raw.push_back(s.name); });
    auto chart_names = unique_identifiers(raw, "scenario");
    std::size_t k = 0;
    doc_.for_each_scenario([&](const Scenario& s) { chart(s, chart_names[k++]); });
    return out_;
  }

 private:
  bool needs_env() const {
    bool env = false;
    doc_.for_each_scenario([&](const Scenario& s) {
      visit_nodes(s.body, [&](const Node& n) {
        if (auto* d = n.get<Do>()) {
          if ((d->kind == EventKind::Start && opt_.mapping.start_point == EndpointMode::env_message) ||
              (d->kind == EventKind::End_Point && opt_.mapping.end_point == EndpointMode::env_message))
            env = true;
        }
      });
    });
    return env;
  }

  const std::string& inst(const std::string& id) const {
    auto it = name_of_.find(id);
    if (it == name_of_.end())
      throw Error(ErrorKind::precondition, kMscStage, "reference to undeclared instance '" + id + "'", id);
    return it->second;
  }

  std::string all_instances() const {
    std::string s;
    for (const auto& id : ids_) s += (s.empty() ? "" : ", ") + name_of_.at(id);
    return s;
  }

  void line(const std::string& s) { out_ += s + ";\n"; }

  void pair(const std::string& name, const std::string& id, const std::string& from, const std::string& to) {
    line(inst(from) + ": out " + name + "," + id + " to " + inst(to));
    line(inst(to) + ": in " + name + "," + id + " from " + inst(from));
  }

  void chart(const Scenario& s, const std::string& name) {
    local_ = 0;
    line("msc " + name);
    for (const auto& id : ids_) line(inst(id) + ": instance");
    node(s.body);
    for (const auto& id : ids_) line(inst(id) + ": endinstance");
    line("endmsc");
  }

  void involved(const Node& n, std::set<std::string>& acc) const {
    visit_nodes(n, [&](const Node& x) {
      if (auto* d = x.get<Do>()) {
        if (!is_message_relevant(d->kind)) return;
        if ((d->kind == EventKind::WP_Enter || d->kind == EventKind::WP_Leave) && opt_.suppress_waiting_places) return;
        acc.insert(owner_of(*d));
        if ((d->kind == EventKind::Start && opt_.mapping.start_point == EndpointMode::env_message) ||
            (d->kind == EventKind::End_Point && opt_.mapping.end_point == EndpointMode::env_message))
          acc.insert(std::string(kEnvId));
      } else if (auto* m = x.get<Message>()) {
        acc.insert(m->source_id);
        acc.insert(m->destination_id);
      } else if (x.is<Condition>()) {
        acc.insert(ids_.begin(), ids_.end());
      }
    });
  }

  void node(const Node& n) {
    if (auto* d = n.get<Do>()) return event(*d);
    if (auto* c = n.get<Condition>()) {
      if (!ids_.empty()) line(all_instances() + ": condition " + condition_label(c->label));
      return;
    }
    if (auto* m = n.get<Message>()) return pair(msc_message_name(m->name), m->id, m->source_id, m->destination_id);
    if (n.is<Seq>()) {
      for (const auto& c : n.as<Seq>().children) node(c);
      return;
    }
    std::set<std::string> inv;
    involved(n, inv);
    if (inv.empty()) return;
    std::string span;
    for (const auto& id : ids_)
      if (inv.count(id)) span += (span.empty() ? "" : ", ") + inst(id);
    line(span + ": par begin");
    bool first = true;
    for (const auto& c : n.as<Par>().children) {
      std::set<std::string> branch;
      involved(c, branch);
      if (branch.empty()) continue;
      if (!first) line(span + ": par");
      first = false;
      node(c);
    }
    line(span + ": par end");
  }

  static std::string condition_label(const std::string& label) {
    std::string s = sanitize(label);
    return s.empty() ? "c" : s;
  }

  std::string event_name(const Do& d) const {
    if (d.name && !d.name->empty()) return *d.name;
    return d.hyperedge_id;
  }

  void event(const Do& d) {
    const std::string owner = owner_of(d);
    const std::string nm = event_name(d);
    switch (d.kind) {
      case EventKind::Resp:
        if (opt_.mapping.responsibility == RespMode::self_message)
          pair(msc_message_name(nm), "x" + std::to_string(++local_), owner, owner);
        else
          line(inst(owner) + ": action " + quote(nm));
        break;
      case EventKind::Start:
        if (opt_.mapping.start_point == EndpointMode::env_message)
          pair(msc_message_name(nm), "x" + std::to_string(++local_), std::string(kEnvId), owner);
        else
          line(inst(owner) + ": action " + quote(nm));
        break;
      case EventKind::End_Point:
        if (opt_.mapping.end_point == EndpointMode::env_message)
          pair(msc_message_name(nm), "x" + std::to_string(++local_), owner, std::string(kEnvId));
        else
          line(inst(owner) + ": action " + quote(nm));
        break;
      case EventKind::Timer_Set: line(inst(owner) + ": starttimer T_" + sanitize(nm)); break;
      case EventKind::Timer_Reset: line(inst(owner) + ": stoptimer T_" + sanitize(nm)); break;
      case EventKind::Timeout: line(inst(owner) + ": timeout T_" + sanitize(nm)); break;
      case EventKind::WP_Enter:
        if (!opt_.suppress_waiting_places) line(inst(owner) + ": condition WP_enter_" + sanitize(nm));
        break;
      case EventKind::WP_Leave:
        if (!opt_.suppress_waiting_places) line(inst(owner) + ": condition WP_leave_" + sanitize(nm));
        break;
      case EventKind::Connect_Start:
      case EventKind::Connect_End:
      case EventKind::Trigger_End: break;
    }
  }

  const ScenarioDocument& doc_;
  const MscOptions& opt_;
  std::vector<std::string> ids_;
  std::map<std::string, std::string> name_of_;
  std::string out_;
  int local_ = 0;
};

}  // namespace detail

/// Event-oriented textual MSC, one `msc` section per scenario.
inline std::string emit_msc(const ScenarioDocument& doc, const MscOptions& options = {}) {
  if (doc.instances.empty()) {
    bool any_event = false;
    doc.for_each_scenario([&](const Scenario& s) {
      visit_nodes(s.body, [&](const Node& n) { any_event = any_event || n.is<Do>() || n.is<Message>(); });
    });
    if (any_event)
      throw Error(ErrorKind::precondition, detail::kMscStage, "document has no instance list; run synthesis first");
  }
  validate_structure(doc);
  return detail::MscEmitter(doc, options).emit();
}

}  // namespace ucmx
