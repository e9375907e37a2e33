// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ucmx/model.hpp"
#include "ucmx/order.hpp"

namespace ucmx {

enum class RenameTarget { message, component, responsibility, start, end };

struct RenameRule {
  RenameTarget target;
  std::string match;
  std::string replacement;
};

struct ParamRule {
  std::string match;
  std::string parameters;
};

enum class Direction { forward, reverse };

struct ProtocolStep {
  Direction direction;
  std::string name;
};

struct ProtocolRule {
  std::string match;
  std::vector<ProtocolStep> steps;
};

struct InterposeRule {
  std::string match;
  std::string via;
};

struct CustomizationRuleSet {
  std::vector<RenameRule> renames;
  std::vector<ParamRule> params;
  std::vector<ProtocolRule> protocols;
  std::vector<InterposeRule> interpositions;

  bool empty() const { return renames.empty() && params.empty() && protocols.empty() && interpositions.empty(); }
};

namespace detail {

inline constexpr const char* kCustomStage = "customization";

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] inline void rule_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::config, kCustomStage, "rules line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Reads the line-oriented rule format:
///
///   rename <message|component|responsibility|start|end> <old> <new>
///   param <message> <parameter-list>
///   protocol <message> := > Step ; < Step ; ...
///   interpose <message> via <instance>
///
/// `#` starts a comment.
inline CustomizationRuleSet parse_rules(std::string_view text) {
  CustomizationRuleSet rules;
  std::set<std::pair<int, std::string>> seen_renames;
  std::set<std::string> seen_params, seen_protocols, seen_interpose;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    auto w = detail::words(line);
    const std::string& verb = w[0];
    if (verb == "rename") {
      if (w.size() != 4) detail::rule_error(lineno, "expected 'rename <kind> <old> <new>'");
      static const std::map<std::string, RenameTarget> kinds{{"message", RenameTarget::message},
                                                             {"component", RenameTarget::component},
                                                             {"responsibility", RenameTarget::responsibility},
                                                             {"start", RenameTarget::start},
                                                             {"end", RenameTarget::end}};
      auto k = kinds.find(w[1]);
      if (k == kinds.end()) detail::rule_error(lineno, "unknown rename target kind '" + w[1] + "'");
      if (!seen_renames.emplace(static_cast<int>(k->second), w[2]).second)
        detail::rule_error(lineno, "duplicate rename for '" + w[2] + "'");
      rules.renames.push_back({k->second, w[2], w[3]});
    } else if (verb == "param") {
      if (w.size() < 3) detail::rule_error(lineno, "expected 'param <message> <parameter-list>'");
      if (!seen_params.insert(w[1]).second) detail::rule_error(lineno, "duplicate param rule for '" + w[1] + "'");
      auto rest = line.substr(line.find(w[1], verb.size()) + w[1].size());
      rules.params.push_back({w[1], detail::trim(rest)});
    } else if (verb == "protocol") {
      auto def = line.find(":=");
      if (w.size() < 2 || def == std::string::npos)
        detail::rule_error(lineno, "expected 'protocol <message> := <steps>'");
      auto head = detail::words(line.substr(0, def));
      if (head.size() != 2) detail::rule_error(lineno, "protocol needs exactly one message name before ':='");
      ProtocolRule p{head[1], {}};
      std::string body = line.substr(def + 2);
      std::istringstream steps(body);
      for (std::string step; std::getline(steps, step, ';');) {
        step = detail::trim(step);
        if (step.empty()) continue;
        Direction dir;
        if (step[0] == '>') dir = Direction::forward;
        else if (step[0] == '<') dir = Direction::reverse;
        else detail::rule_error(lineno, "protocol step must start with '>' or '<': '" + step + "'");
        std::string name = detail::trim(step.substr(1));
        if (name.empty()) detail::rule_error(lineno, "protocol step without a name");
        p.steps.push_back({dir, name});
      }
      if (p.steps.empty()) detail::rule_error(lineno, "protocol step list is empty");
      if (!seen_protocols.insert(p.match).second)
        detail::rule_error(lineno, "duplicate protocol rule for '" + p.match + "'");
      rules.protocols.push_back(std::move(p));
    } else if (verb == "interpose") {
      if (w.size() != 4 || w[2] != "via") detail::rule_error(lineno, "expected 'interpose <message> via <instance>'");
      if (!seen_interpose.insert(w[1]).second)
        detail::rule_error(lineno, "duplicate interpose rule for '" + w[1] + "'");
      rules.interpositions.push_back({w[1], w[3]});
    } else {
      detail::rule_error(lineno, "unknown rule '" + verb + "'");
    }
  }
  return rules;
}

namespace detail {

template <class Rule>
const Rule* first_match(const std::vector<Rule>& rules, const std::string& name) {
  for (const auto& r : rules)
    if (r.match == name) return &r;
  return nullptr;
}

inline const RenameRule* first_rename(const std::vector<RenameRule>& rules, RenameTarget t, const std::string& name) {
  for (const auto& r : rules)
    if (r.target == t && r.match == name) return &r;
  return nullptr;
}

template <class F>
void rewrite_blocks(Node& n, F&& expand) {
  auto* kids = children_of(n);
  if (!kids) return;
  std::vector<Node> out;
  out.reserve(kids->size());
  for (auto& c : *kids) {
    if (c.is_block()) {
      rewrite_blocks(c, expand);
      out.push_back(std::move(c));
    } else if (auto* m = c.get<Message>()) {
      auto replacement = expand(*m);
      if (replacement.empty()) {
        out.push_back(std::move(c));
      } else if (n.is<Seq>()) {
        for (auto& r : replacement) out.emplace_back(std::move(r));
      } else {
        Seq wrapped;
        for (auto& r : replacement) wrapped.children.emplace_back(std::move(r));
        out.emplace_back(std::move(wrapped));
      }
    } else {
      out.push_back(std::move(c));
    }
  }
  *kids = std::move(out);
}

}  // namespace detail

/// Applies renames, then parameters, then protocols, then interpositions.
/// Each element is rewritten by at most one rule of each list, the first
/// that matches.
inline ScenarioDocument apply_rules(ScenarioDocument doc, const CustomizationRuleSet& rules) {
  if (rules.empty()) return doc;

  // Component renames touch the instance list and every event referencing it.
  for (auto& inst : doc.instances)
    if (auto* r = detail::first_rename(rules.renames, RenameTarget::component, inst.name)) inst.name = r->replacement;

  for (auto& g : doc.groups) {
    for (auto& s : g.scenarios) {
      visit_nodes(s.body, [&](Node& n) {
        if (auto* d = n.get<Do>()) {
          if (d->component_name)
            if (auto* r = detail::first_rename(rules.renames, RenameTarget::component, *d->component_name))
              d->component_name = r->replacement;
          if (d->name) {
            std::optional<RenameTarget> t;
            if (d->kind == EventKind::Resp) t = RenameTarget::responsibility;
            if (d->kind == EventKind::Start) t = RenameTarget::start;
            if (d->kind == EventKind::End_Point) t = RenameTarget::end;
            if (t)
              if (auto* r = detail::first_rename(rules.renames, *t, *d->name)) d->name = r->replacement;
          }
        } else if (auto* m = n.get<Message>()) {
          if (auto* r = detail::first_rename(rules.renames, RenameTarget::message, m->name)) m->name = r->replacement;
          if (auto* p = detail::first_match(rules.params, m->name)) m->name += "(" + p->parameters + ")";
          if (detail::first_match(rules.protocols, m->name) && detail::first_match(rules.interpositions, m->name))
            throw Error(ErrorKind::config, detail::kCustomStage,
                        "protocol and interposition rules both match message '" + m->name + "'", m->id);
        }
      });
    }
  }

  std::set<std::string> protocol_ids;
  if (!rules.protocols.empty()) {
    for (auto& g : doc.groups)
      for (auto& s : g.scenarios)
        detail::rewrite_blocks(s.body, [&](const Message& m) {
          std::vector<Message> out;
          const auto* p = detail::first_match(rules.protocols, m.name);
          if (!p) return out;
          int k = 0;
          for (const auto& step : p->steps) {
            Message x = m;
            x.id = m.id + "." + std::to_string(++k);
            x.name = step.name;
            if (step.direction == Direction::reverse) std::swap(x.source_id, x.destination_id);
            protocol_ids.insert(x.id);
            out.push_back(std::move(x));
          }
          return out;
        });
  }

  if (!rules.interpositions.empty()) {
    for (auto& g : doc.groups)
      for (auto& s : g.scenarios)
        detail::rewrite_blocks(s.body, [&](const Message& m) {
          std::vector<Message> out;
          // Protocol expansions are final.
          const auto* r = detail::first_match(rules.interpositions, m.name);
          if (!r || protocol_ids.count(m.id)) return out;
          std::string via_id;
          for (const auto& inst : doc.instances)
            if (inst.name == r->via) via_id = inst.id;
          if (via_id.empty()) {
            via_id = sanitize(r->via);
            while (doc.find_instance(via_id)) via_id += "_";
            doc.instances.push_back({via_id, r->via, {}});
          }
          Message a = m, b = m;
          a.id = m.id + ".1";
          a.destination_id = via_id;
          b.id = m.id + ".2";
          b.source_id = via_id;
          out.push_back(std::move(a));
          out.push_back(std::move(b));
          return out;
        });
  }
  return doc;
}

enum class InterleaveKind { keep_par, single, all };

struct InterleaveMode {
  InterleaveKind mode = InterleaveKind::keep_par;
  std::size_t cap = 64;
};

namespace detail {

inline void flatten_into(std::vector<Node>& out, Node&& n);

inline Node sequentialize(Node&& n) {
  if (n.is_leaf()) return std::move(n);
  Seq s;
  flatten_into(s.children, std::move(n));
  return s;
}

// Appends the sequential form of n to a Seq's children.
inline void flatten_into(std::vector<Node>& out, Node&& n) {
  if (n.is_leaf()) {
    out.push_back(std::move(n));
    return;
  }
  for (auto& c : *children_of(n)) flatten_into(out, std::move(c));
}

}  // namespace detail

/// Removes parallelism: `single` concatenates branches in document order,
/// `all` replaces each scenario by one sequential scenario per linearization.
inline ScenarioDocument synthesize_interleavings(ScenarioDocument doc, const InterleaveMode& mode) {
  if (mode.cap < 1) throw Error(ErrorKind::precondition, "customization", "interleaving cap must be >= 1");
  if (mode.mode == InterleaveKind::keep_par) return doc;
  for (auto& g : doc.groups) {
    if (mode.mode == InterleaveKind::single) {
      for (auto& s : g.scenarios) s.body = detail::sequentialize(std::move(s.body));
      continue;
    }
    std::vector<Scenario> expanded;
    for (auto& s : g.scenarios) {
      std::vector<std::vector<std::size_t>> orders;
      try {
        orders = linearization_indices(s.body, mode.cap);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::overflow) throw;
        throw Error(ErrorKind::overflow, "customization",
                    "scenario '" + s.name + "': " + std::to_string(count_linearizations(s.body)) +
                        " interleavings exceed cap " + std::to_string(mode.cap),
                    s.name);
      }
      PartialOrder po(s.body);
      for (std::size_t k = 0; k < orders.size(); ++k) {
        const std::string suffix = "_il" + std::to_string(k + 1);
        Scenario copy;
        copy.definition_id = s.definition_id;
        copy.name = s.name + suffix;
        copy.description = s.description;
        Seq body;
        for (auto i : orders[k]) {
          Node leaf = po.leaf(i);
          if (auto* m = leaf.get<Message>()) m->id += suffix;
          body.children.push_back(std::move(leaf));
        }
        copy.body = std::move(body);
        expanded.push_back(std::move(copy));
      }
    }
    g.scenarios = std::move(expanded);
  }
  return doc;
}

}  // namespace ucmx
