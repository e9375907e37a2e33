// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucmx/model.hpp"
#include "ucmx/ucm.hpp"

namespace ucmx {

struct TraversalLimits {
  std::size_t max_node_visits = 100;
};

namespace detail {

inline constexpr const char* kTraversalStage = "ucm-traversal";

// Stack of (stub node id, selected plug-in index) for the plug-ins being walked.
using StubContext = std::vector<std::pair<std::string, std::size_t>>;

struct PendingJoin {
  std::string join;
  StubContext context;
  std::size_t arrived = 0;
};

// Events of one walked path plus the AND-joins it reached but could not fire.
struct Flow {
  std::vector<Node> seq;
  std::vector<PendingJoin> pending;
};

inline void splice(std::vector<Node>& into, std::vector<Node>&& from) {
  for (auto& n : from) into.push_back(std::move(n));
}

inline void merge_pending(std::vector<PendingJoin>& into, std::vector<PendingJoin>&& from) {
  for (auto& p : from) {
    bool merged = false;
    for (auto& q : into)
      if (q.join == p.join && q.context == p.context) {
        q.arrived += p.arrived;
        merged = true;
        break;
      }
    if (!merged) into.push_back(std::move(p));
  }
}

class Traverser {
 public:
  Traverser(const ucm::Graph& g, const ucm::ScenarioDefinition& def, TraversalLimits limits)
      : g_(g), def_(def), limits_(limits) {
    for (const auto& v : g.variables) store_[v] = false;
    for (const auto& [v, val] : def.initial) store_[v] = val;
  }

  Scenario run() {
    Flow top;
    for (const auto& sp : def_.start_points) {
      Flow f = walk(sp, {}, std::nullopt);
      splice(top.seq, std::move(f.seq));
      merge_pending(top.pending, std::move(f.pending));
      fire_joins(top);
    }
    if (!top.pending.empty()) {
      std::string what = "deadlock: and-join(s) never completed:";
      for (const auto& p : top.pending)
        what += " " + p.join + " (" + std::to_string(p.arrived) + " of " + std::to_string(g_.in_degree(p.join)) +
                " branches arrived)";
      throw Error(ErrorKind::traversal, kTraversalStage, what, top.pending.front().join);
    }
    for (const auto& pc : def_.postconditions) {
      if (store_.at(pc.variable) != pc.value)
        throw Error(ErrorKind::traversal, kTraversalStage,
                    "postcondition failure: " + pc.variable + " is " + (store_.at(pc.variable) ? "true" : "false") +
                        ", expected " + (pc.value ? "true" : "false"),
                    def_.name);
    }
    Scenario s;
    s.definition_id = def_.id;
    s.name = def_.name;
    s.body = Seq{std::move(top.seq)};
    return s;
  }

 private:
  std::string visit(const ucm::Node& n) {
    std::size_t k = ++visits_[n.id];
    if (k > limits_.max_node_visits)
      throw Error(ErrorKind::traversal, kTraversalStage,
                  "loop cap exceeded: node visited more than " + std::to_string(limits_.max_node_visits) + " times",
                  n.id);
    return k == 1 ? n.id : n.id + "." + std::to_string(k);
  }

  Do event(const ucm::Node& n, std::string id, EventKind kind) const {
    Do d;
    d.hyperedge_id = std::move(id);
    if (!n.name.empty()) d.name = n.name;
    d.kind = kind;
    if (n.component) {
      const auto* c = g_.component(*n.component);
      d.component_id = c->id;
      d.component_name = c->name;
      d.component_role = c->role;
    }
    return d;
  }

  const ucm::Edge& only_edge(const ucm::Node& n) const { return *g_.out_edges(n.id).front(); }

  // Walks from `start` until the path ends, blocks at an AND-join, or forks.
  Flow walk(std::string cur, StubContext ctx, std::optional<std::string> segment) {
    Flow f;
    bool via_binding = false;  // `cur` is a plug-in start entered from its stub
    auto follow = [&](const ucm::Edge& e) {
      cur = e.to;
      segment = e.segment;
      via_binding = false;
    };
    for (;;) {
      const ucm::Node& n = *g_.node(cur);
      switch (n.kind) {
        case ucm::NodeKind::start: {
          f.seq.emplace_back(event(n, visit(n), via_binding ? EventKind::Connect_Start : EventKind::Start));
          follow(only_edge(n));
          break;
        }
        case ucm::NodeKind::resp:
          f.seq.emplace_back(event(n, visit(n), EventKind::Resp));
          for (const auto& e : n.effects) store_[e.variable] = e.value;
          follow(only_edge(n));
          break;
        case ucm::NodeKind::or_join:
          visit(n);
          follow(only_edge(n));
          break;
        case ucm::NodeKind::waiting_place: {
          std::string id = visit(n);
          f.seq.emplace_back(event(n, id, EventKind::WP_Enter));
          f.seq.emplace_back(event(n, id + "_leave", EventKind::WP_Leave));
          follow(only_edge(n));
          break;
        }
        case ucm::NodeKind::or_fork: {
          std::string id = visit(n);
          const ucm::Edge* chosen = nullptr;
          for (const auto* e : g_.out_edges(n.id))
            if (e->guard.eval(store_)) {
              chosen = e;
              break;
            }
          if (!chosen)
            throw Error(ErrorKind::traversal, kTraversalStage, "blocked alternative: no guard of or-fork is true",
                        n.id);
          Condition c;
          c.hyperedge_id = id;
          c.label = chosen->label ? *chosen->label : (chosen->guard.text().empty() ? "true" : chosen->guard.text());
          if (!chosen->guard.text().empty()) c.expression = chosen->guard.text();
          f.seq.emplace_back(std::move(c));
          follow(*chosen);
          break;
        }
        case ucm::NodeKind::timer: {
          std::string id = visit(n);
          f.seq.emplace_back(event(n, id, EventKind::Timer_Set));
          const ucm::Edge* timeout = nullptr;
          const ucm::Edge* cont = nullptr;
          for (const auto* e : g_.out_edges(n.id)) (e->timeout ? timeout : cont) = e;
          if (timeout->guard.eval(store_)) {
            f.seq.emplace_back(event(n, id + "_timeout", EventKind::Timeout));
            follow(*timeout);
          } else {
            f.seq.emplace_back(event(n, id + "_reset", EventKind::Timer_Reset));
            follow(*cont);
          }
          break;
        }
        case ucm::NodeKind::stub: {
          visit(n);
          const ucm::Stub& stub = *g_.stub(n.id);
          std::size_t pick = stub.plugins.size();
          for (std::size_t i = 0; i < stub.plugins.size(); ++i)
            if (stub.kind == ucm::StubKind::static_stub || stub.plugins[i].precondition.eval(store_)) {
              pick = i;
              break;
            }
          if (pick == stub.plugins.size())
            throw Error(ErrorKind::traversal, kTraversalStage,
                        "plug-in selection failed: no precondition of dynamic stub holds", n.id);
          const ucm::Binding* in = nullptr;
          for (const auto& b : stub.plugins[pick].bindings)
            if (b.in && (!segment || b.segment == *segment) && !in) in = &b;
          if (!in)
            throw Error(ErrorKind::traversal, kTraversalStage,
                        "plug-in '" + stub.plugins[pick].map + "' binds no IN segment '" + segment.value_or("") + "'",
                        n.id);
          ctx.emplace_back(n.id, pick);
          cur = in->node;
          segment.reset();
          via_binding = true;
          break;
        }
        case ucm::NodeKind::end: {
          std::string id = visit(n);
          const ucm::Binding* out = nullptr;
          if (!ctx.empty()) {
            const auto& plugin = g_.stub(ctx.back().first)->plugins[ctx.back().second];
            for (const auto& b : plugin.bindings)
              if (!b.in && b.node == n.id) out = &b;
          }
          if (!out) {
            f.seq.emplace_back(event(n, id, EventKind::End_Point));
            return f;
          }
          f.seq.emplace_back(event(n, id, EventKind::Connect_End));
          const std::string stub_node = ctx.back().first;
          ctx.pop_back();
          const ucm::Edge* next = nullptr;
          auto outs = g_.out_edges(stub_node);
          for (const auto* e : outs)
            if (e->segment && *e->segment == out->segment) next = e;
          if (!next && outs.size() == 1 && !outs.front()->segment) next = outs.front();
          if (!next) return f;  // OUT segment not connected: the path ends inside the stub
          follow(*next);
          break;
        }
        case ucm::NodeKind::and_join:
          f.pending.push_back({n.id, ctx, 1});
          return f;
        case ucm::NodeKind::and_fork: {
          visit(n);
          Par par;
          std::vector<PendingJoin> pending;
          for (const auto* e : g_.out_edges(n.id)) {
            Flow b = walk(e->to, ctx, e->segment);
            if (!b.seq.empty()) par.children.emplace_back(Seq{std::move(b.seq)});
            merge_pending(pending, std::move(b.pending));
          }
          if (par.children.size() == 1)
            splice(f.seq, std::move(par.children.front().as<Seq>().children));
          else if (!par.children.empty())
            f.seq.emplace_back(std::move(par));
          f.pending = std::move(pending);
          fire_joins(f);
          return f;
        }
      }
    }
  }

  // Fires every pending join whose incoming branches have all arrived; the
  // continuation is sequenced after everything already in `f`.
  void fire_joins(Flow& f) {
    for (;;) {
      auto it = f.pending.begin();
      for (; it != f.pending.end(); ++it)
        if (it->arrived >= g_.in_degree(it->join)) break;
      if (it == f.pending.end()) return;
      PendingJoin p = std::move(*it);
      f.pending.erase(it);
      const ucm::Node& j = *g_.node(p.join);
      if (p.arrived > g_.in_degree(p.join))
        throw Error(ErrorKind::traversal, kTraversalStage, "and-join reached more often than it has branches", j.id);
      visit(j);
      Flow cont = walk(only_edge(j).to, p.context, only_edge(j).segment);
      splice(f.seq, std::move(cont.seq));
      merge_pending(f.pending, std::move(cont.pending));
    }
  }

  const ucm::Graph& g_;
  const ucm::ScenarioDefinition& def_;
  TraversalLimits limits_;
  std::map<std::string, bool> store_;
  std::map<std::string, std::size_t> visits_;
};

}  // namespace detail

/// Extracts one well-nested scenario. Start points are walked in definition
/// order; a path blocked at an AND-join waits for the remaining start points.
inline Scenario traverse(const ucm::Graph& graph, const ucm::ScenarioDefinition& definition,
                         TraversalLimits limits = {}) {
  return detail::Traverser(graph, definition, limits).run();
}

/// Plain scenario document with one group holding a scenario per definition,
/// or only the definition named `only` when given.
inline ScenarioDocument traverse_model(const ucm::Model& model, const std::string& ucm_file,
                                       const std::optional<std::string>& only = std::nullopt,
                                       TraversalLimits limits = {}) {
  ScenarioDocument doc;
  doc.date = model.graph.date;
  doc.ucm_file = ucm_file;
  doc.design_name = model.graph.name;
  doc.ucm_design_version = model.graph.version;
  Group g;
  g.name = model.graph.name.empty() ? "scenarios" : model.graph.name;
  for (const auto& d : model.definitions)
    if (!only || d.name == *only) g.scenarios.push_back(traverse(model.graph, d, limits));
  if (only && g.scenarios.empty())
    throw Error(ErrorKind::traversal, detail::kTraversalStage, "no scenario definition named '" + *only + "'", *only);
  doc.groups.push_back(std::move(g));
  return doc;
}

}  // namespace ucmx
