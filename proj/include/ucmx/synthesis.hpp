// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ucmx/labels.hpp"
#include "ucmx/model.hpp"
#include "ucmx/order.hpp"

namespace ucmx {

enum class EndpointMode { env_message, action };
enum class RespMode { action, self_message };

/// How start points, end points and responsibilities map onto the target.
struct MappingConfig {
  EndpointMode start_point = EndpointMode::action;
  EndpointMode end_point = EndpointMode::action;
  RespMode responsibility = RespMode::action;
};

struct Anchor {
  std::string instance;
  std::string event_id;
  EventKind kind = EventKind::Resp;

  bool operator==(const Anchor&) const = default;
};

/// Instances adjacent to a parallel block. `pre_from_par` / `post_from_par`
/// mark anchors inherited from a neighbouring Par rather than from an event.
struct AnchorSets {
  std::vector<Anchor> pre_par;
  std::vector<std::vector<Anchor>> branch_first;
  std::vector<std::vector<Anchor>> branch_last;
  std::vector<Anchor> post_par;
  bool pre_from_par = false;
  bool post_from_par = false;
};

namespace detail {

inline constexpr const char* kSynthStage = "message-synthesis";

inline bool has_relevant(const Node& n) {
  bool found = false;
  visit_nodes(n, [&](const Node& x) {
    if (auto* d = x.get<Do>(); d && is_message_relevant(d->kind)) found = true;
  });
  return found;
}

inline std::vector<Anchor> edge_set(const Node& n, bool first) {
  if (auto* d = n.get<Do>()) {
    if (is_message_relevant(d->kind)) return {Anchor{owner_of(*d), d->hyperedge_id, d->kind}};
    return {};
  }
  if (n.is<Seq>()) {
    const auto& kids = n.as<Seq>().children;
    if (first) {
      for (const auto& c : kids)
        if (auto s = edge_set(c, true); !s.empty()) return s;
    } else {
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        if (auto s = edge_set(*it, false); !s.empty()) return s;
    }
    return {};
  }
  if (n.is<Par>()) {
    std::vector<Anchor> out;
    for (const auto& c : n.as<Par>().children) {
      auto s = edge_set(c, first);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  return {};
}

inline std::vector<std::string> distinct_instances(const std::vector<Anchor>& as) {
  std::vector<std::string> out;
  for (const auto& a : as)
    if (std::find(out.begin(), out.end(), a.instance) == out.end()) out.push_back(a.instance);
  return out;
}

inline std::vector<Anchor> anchors_of(const std::vector<Anchor>& as, const std::string& inst) {
  std::vector<Anchor> out;
  for (const auto& a : as)
    if (a.instance == inst) out.push_back(a);
  return out;
}

inline int next_message_number(const Node& body) {
  int n = 0;
  visit_nodes(body, [&](const Node& x) {
    if (x.is<Message>()) ++n;
  });
  return n + 1;
}

inline std::string message_id(int scenario_ordinal, int n) {
  return "S" + std::to_string(scenario_ordinal) + "_m" + std::to_string(n);
}

inline Message make_message(int ordinal, int n, std::string src, std::string dst, const Anchor* anchor,
                            std::string connector_type, bool connector) {
  Message m;
  m.id = message_id(ordinal, n);
  m.name = "m" + std::to_string(n);
  m.source_id = std::move(src);
  m.destination_id = std::move(dst);
  if (anchor) {
    m.is_task = anchor->kind == EventKind::Resp;
    m.is_timer = anchor->kind == EventKind::Timer_Set || anchor->kind == EventKind::Timeout;
    if (m.is_timer) m.timer_property = std::string(to_string(anchor->kind));
    m.last_ref = anchor->event_id;
  }
  m.is_connector = connector;
  m.connector_type = std::move(connector_type);
  return m;
}

inline void ensure_env_instance(ScenarioDocument& doc) {
  bool used = false;
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (auto* m = n.get<Message>(); m && (m->source_id == kEnvId || m->destination_id == kEnvId)) used = true;
    });
  });
  if (used && !doc.find_instance(kEnvId)) doc.instances.push_back({std::string(kEnvId), std::string(kEnvName), {}});
}

}  // namespace detail

/// Populates the instance list with every (component-id, name, role) referenced
/// by an event, in first-appearance order, plus the environment when some
/// event is unallocated.
inline ScenarioDocument extract_instances(ScenarioDocument doc) {
  doc.instances.clear();
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (n.is<Message>())
        throw Error(ErrorKind::precondition, detail::kSynthStage, "instance extraction expects a plain document",
                    n.as<Message>().id);
      const auto* d = n.get<Do>();
      if (!d) return;
      if (!d->component_id) {
        if (!doc.find_instance(kEnvId)) doc.instances.push_back({std::string(kEnvId), std::string(kEnvName), {}});
        return;
      }
      if (*d->component_id == kEnvId)
        throw Error(ErrorKind::validation, detail::kSynthStage, "component-id '__env__' is reserved",
                    d->hyperedge_id);
      if (const auto* existing = doc.find_instance(*d->component_id)) {
        if (existing->name != d->component_name.value_or(""))
          throw Error(ErrorKind::validation, detail::kSynthStage,
                      "component '" + *d->component_id + "' is named both '" + existing->name + "' and '" +
                          d->component_name.value_or("") + "'",
                      d->hyperedge_id);
        return;
      }
      doc.instances.push_back({*d->component_id, d->component_name.value_or(""), d->component_role});
    });
  });
  return doc;
}

/// Inserts one message between consecutive message-relevant events of the
/// same Seq that live in different instances. Par blocks are not crossed,
/// except those without any relevant event, which are transparent.
inline ScenarioDocument synthesize_sequential_messages(ScenarioDocument doc, const MappingConfig& = {}) {
  int ordinal = 0;
  doc.for_each_scenario([&](Scenario& s) {
    ++ordinal;
    validate_structure(s.body, s.name);
    int counter = detail::next_message_number(s.body);
    auto rec = [&](auto&& self, Node& block) -> void {
      if (block.is<Par>()) {
        for (auto& c : block.as<Par>().children)
          if (c.is<Seq>()) self(self, c);
        return;
      }
      auto& kids = block.as<Seq>().children;
      std::vector<Node> out;
      out.reserve(kids.size());
      std::optional<Anchor> last;
      for (auto& c : kids) {
        if (auto* d = c.get<Do>(); d && is_message_relevant(d->kind)) {
          std::string owner = owner_of(*d);
          if (last && last->instance != owner) {
            out.emplace_back(detail::make_message(ordinal, counter++, last->instance, owner, &*last, "intra-seq",
                                                  false));
          }
          last = Anchor{owner, d->hyperedge_id, d->kind};
        } else if (c.is<Par>()) {
          if (detail::has_relevant(c)) {
            self(self, c);
            last.reset();
          }
        }
        out.push_back(std::move(c));
      }
      kids = std::move(out);
    };
    rec(rec, s.body);
  });
  return doc;
}

/// Anchors of the Par at `siblings[index]`; pass a null `siblings` when the
/// Par is itself the scenario body.
inline AnchorSets compute_anchor_sets(const std::vector<Node>* siblings, std::size_t index, const Par& par) {
  AnchorSets a;
  for (const auto& branch : par.children) {
    a.branch_first.push_back(detail::edge_set(branch, true));
    a.branch_last.push_back(detail::edge_set(branch, false));
  }
  if (!siblings) return a;
  for (std::size_t i = index; i-- > 0;) {
    if (auto s = detail::edge_set((*siblings)[i], false); !s.empty()) {
      a.pre_par = std::move(s);
      a.pre_from_par = (*siblings)[i].is<Par>();
      break;
    }
  }
  for (std::size_t i = index + 1; i < siblings->size(); ++i) {
    if (auto s = detail::edge_set((*siblings)[i], true); !s.empty()) {
      a.post_par = std::move(s);
      a.post_from_par = (*siblings)[i].is<Par>();
      break;
    }
  }
  return a;
}

/// Applies the four parallel connector rules. Entry messages go at branch
/// heads, exit messages at branch tails. Where a Par directly follows another
/// Par, the link between them is carried by the later block's entry messages
/// only.
inline ScenarioDocument synthesize_parallel_messages(ScenarioDocument doc, const MappingConfig& config = {}) {
  int ordinal = 0;
  doc.for_each_scenario([&](Scenario& s) {
    ++ordinal;
    validate_structure(s.body, s.name);
    int counter = detail::next_message_number(s.body);

    auto handle_par = [&](auto&& self, std::vector<Node>* siblings, std::size_t index, Node& par_node,
                          bool at_root) -> void {
      auto& par = par_node.as<Par>();
      AnchorSets a = compute_anchor_sets(siblings, index, par);
      if (a.pre_par.empty() && at_root && config.start_point == EndpointMode::env_message)
        a.pre_par.push_back({std::string(kEnvId), "", EventKind::Start});
      bool exits = !a.post_from_par;
      if (a.post_par.empty() && at_root && config.end_point == EndpointMode::env_message)
        a.post_par.push_back({std::string(kEnvId), "", EventKind::End_Point});

      const auto pre_insts = detail::distinct_instances(a.pre_par);
      const auto post_insts = detail::distinct_instances(a.post_par);
      std::vector<std::vector<Node>> heads(par.children.size()), tails(par.children.size());

      for (std::size_t j = 0; j < par.children.size(); ++j) {
        for (const auto& p : pre_insts) {
          auto from = detail::anchors_of(a.pre_par, p);
          const Anchor& anchor = from[std::min(j, from.size() - 1)];
          for (const auto& f : detail::distinct_instances(a.branch_first[j])) {
            if (f == p) continue;
            heads[j].emplace_back(detail::make_message(ordinal, counter++, p, f, anchor.event_id.empty() ? nullptr : &anchor,
                                                       "pre-par", true));
          }
        }
      }
      if (exits) {
        for (std::size_t j = 0; j < par.children.size(); ++j) {
          for (const auto& l : detail::distinct_instances(a.branch_last[j])) {
            auto from = detail::anchors_of(a.branch_last[j], l);
            const Anchor& anchor = from.back();
            for (const auto& q : post_insts) {
              if (q == l) continue;
              tails[j].emplace_back(detail::make_message(ordinal, counter++, l, q, &anchor, "post-par", true));
            }
          }
        }
      }

      for (std::size_t j = 0; j < par.children.size(); ++j) {
        Node& branch = par.children[j];
        if (heads[j].empty() && tails[j].empty()) continue;
        if (!branch.is<Seq>()) branch = Seq{{std::move(branch)}};
        auto& kids = branch.as<Seq>().children;
        kids.insert(kids.begin(), std::make_move_iterator(heads[j].begin()),
                    std::make_move_iterator(heads[j].end()));
        kids.insert(kids.end(), std::make_move_iterator(tails[j].begin()), std::make_move_iterator(tails[j].end()));
      }

      for (auto& branch : par.children) {
        if (!branch.is<Seq>()) continue;
        auto& kids = branch.as<Seq>().children;
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (kids[i].is<Par>() && detail::has_relevant(kids[i])) self(self, &kids, i, kids[i], false);
      }
    };

    if (s.body.is<Par>()) {
      if (detail::has_relevant(s.body)) handle_par(handle_par, nullptr, 0, s.body, true);
    } else {
      auto& kids = s.body.as<Seq>().children;
      for (std::size_t i = 0; i < kids.size(); ++i)
        if (kids[i].is<Par>() && detail::has_relevant(kids[i])) handle_par(handle_par, &kids, i, kids[i], true);
    }
    label_messages(s.body);
  });
  detail::ensure_env_instance(doc);
  return doc;
}

namespace detail {

inline bool is_sender_anchor_kind(EventKind k) { return k == EventKind::Resp || k == EventKind::Start; }
inline bool is_receiver_anchor_kind(EventKind k) { return k == EventKind::Resp || k == EventKind::End_Point; }

// Picks the nearest named event of `inst` on one side of leaf `m`.
inline std::optional<std::string> nearest_named(const PartialOrder& po, std::size_t m, const std::string& inst,
                                                bool preceding, const std::string& preferred_id,
                                                bool restrict_kinds) {
  std::vector<std::size_t> cands;
  for (std::size_t j = 0; j < po.size(); ++j) {
    const auto* d = po.leaf(j).get<Do>();
    if (!d || !d->name || d->name->empty() || owner_of(*d) != inst) continue;
    if (restrict_kinds && !(preceding ? is_sender_anchor_kind(d->kind) : is_receiver_anchor_kind(d->kind)))
      continue;
    if (preceding ? po.before(j, m) : po.before(m, j)) cands.push_back(j);
  }
  if (cands.empty()) return std::nullopt;
  std::vector<std::size_t> best;
  for (auto c : cands) {
    bool dominated = false;
    for (auto d : cands)
      if (preceding ? po.before(c, d) : po.before(d, c)) dominated = true;
    if (!dominated) best.push_back(c);
  }
  if (preceding) {
    for (auto b : best)
      if (!preferred_id.empty() && po.id(b) == preferred_id) return *po.leaf(b).as<Do>().name;
    return *po.leaf(best.back()).as<Do>().name;
  }
  return *po.leaf(best.front()).as<Do>().name;
}

}  // namespace detail

/// Context-dependent name `did_<P>_do_<N>` of a message at leaf index `m`.
inline std::string context_name(const ScenarioDocument& doc, const PartialOrder& po, std::size_t m) {
  const auto& msg = po.leaf(m).as<Message>();
  auto p = detail::nearest_named(po, m, msg.source_id, true, msg.last_ref, true);
  if (!p) p = detail::nearest_named(po, m, msg.source_id, true, msg.last_ref, false);
  if (!p) p = instance_name(doc, msg.source_id);
  auto n = detail::nearest_named(po, m, msg.destination_id, false, {}, true);
  if (!n) n = detail::nearest_named(po, m, msg.destination_id, false, {}, false);
  if (!n) n = instance_name(doc, msg.destination_id);
  return "did_" + sanitize(*p) + "_do_" + sanitize(*n);
}

/// Replaces dummy names with names derived from the causal context.
inline ScenarioDocument assign_context_names(ScenarioDocument doc) {
  for (auto& g : doc.groups) {
    for (auto& s : g.scenarios) {
      std::vector<std::string> names;
      {
        PartialOrder po(s.body);
        names.resize(po.size());
        for (std::size_t i = 0; i < po.size(); ++i)
          if (po.leaf(i).is<Message>()) names[i] = context_name(doc, po, i);
      }
      std::size_t i = 0;
      auto rec = [&](auto&& self, Node& n) -> void {
        if (n.is_leaf()) {
          if (auto* m = n.get<Message>()) m->name = names[i];
          ++i;
          return;
        }
        for (auto& c : *children_of(n)) self(self, c);
      };
      rec(rec, s.body);
    }
  }
  return doc;
}

/// Stages one to four: instances, sequential messages, connectors, names.
inline ScenarioDocument synthesize(ScenarioDocument doc, const MappingConfig& config = {}) {
  doc = extract_instances(std::move(doc));
  doc = synthesize_sequential_messages(std::move(doc), config);
  doc = synthesize_parallel_messages(std::move(doc), config);
  return assign_context_names(std::move(doc));
}

}  // namespace ucmx
