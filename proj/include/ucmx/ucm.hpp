// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ucmx/error.hpp"
#include "ucmx/guard.hpp"
#include "ucmx/xml.hpp"

namespace ucmx::ucm {

inline constexpr const char* kUcmStage = "ucm";

enum class NodeKind { start, end, resp, or_fork, or_join, and_fork, and_join, timer, waiting_place, stub };

inline constexpr std::pair<NodeKind, std::string_view> kNodeKindNames[] = {
    {NodeKind::start, "start"},         {NodeKind::end, "end"},
    {NodeKind::resp, "resp"},           {NodeKind::or_fork, "or-fork"},
    {NodeKind::or_join, "or-join"},     {NodeKind::and_fork, "and-fork"},
    {NodeKind::and_join, "and-join"},   {NodeKind::timer, "timer"},
    {NodeKind::waiting_place, "waiting-place"}, {NodeKind::stub, "stub"},
};

inline std::string_view to_string(NodeKind k) {
  for (const auto& [kind, name] : kNodeKindNames)
    if (kind == k) return name;
  return "?";
}

struct Effect {
  std::string variable;
  bool value = false;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::resp;
  std::string name;
  std::optional<std::string> component;
  std::vector<Effect> effects;
  std::string map;
};

struct Edge {
  std::string from;
  std::string to;
  Guard guard;  // defaults to true
  std::optional<std::string> label;
  std::optional<std::string> segment;  // stub IN segment when `to` is a stub, OUT segment when `from` is
  bool timeout = false;                // the timeout path of a timer
};

struct Binding {
  bool in = true;       // IN segment -> plug-in start, otherwise plug-in end -> OUT segment
  std::string segment;
  std::string node;     // start node (in) or end node (out) of the plug-in map
};

struct Plugin {
  std::string map;
  Guard precondition;
  std::vector<Binding> bindings;
};

enum class StubKind { static_stub, dynamic_stub };

struct Stub {
  std::string node;
  StubKind kind = StubKind::static_stub;
  std::vector<Plugin> plugins;  // selection order
};

struct Component {
  std::string id;
  std::string name;
  std::optional<std::string> role;
};

struct Map {
  std::string id;
  bool root = true;
};

struct Graph {
  std::string name;
  std::string date;
  std::string version = "1";
  std::vector<std::string> variables;
  std::vector<Component> components;
  std::vector<Map> maps;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Stub> stubs;

  const Node* node(std::string_view id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const Component* component(std::string_view id) const {
    for (const auto& c : components)
      if (c.id == id) return &c;
    return nullptr;
  }
  const Stub* stub(std::string_view node_id) const {
    for (const auto& s : stubs)
      if (s.node == node_id) return &s;
    return nullptr;
  }
  std::vector<const Edge*> out_edges(std::string_view id) const {
    std::vector<const Edge*> out;
    for (const auto& e : edges)
      if (e.from == id) out.push_back(&e);
    return out;
  }
  std::size_t in_degree(std::string_view id) const {
    std::size_t n = 0;
    for (const auto& e : edges)
      if (e.to == id) ++n;
    return n;
  }
  bool has_variable(std::string_view v) const {
    for (const auto& x : variables)
      if (x == v) return true;
    return false;
  }
};

struct ScenarioDefinition {
  std::string id;
  std::string name;
  std::map<std::string, bool> initial;
  std::vector<std::string> start_points;
  std::vector<Effect> postconditions;
};

struct Model {
  Graph graph;
  std::vector<ScenarioDefinition> definitions;
};

namespace detail {

class Reader {
 public:
  Model read(const xml::Element& root) {
    if (root.name != "ucm") fail(root, "root element must be <ucm>");
    attrs(root, {"name", "date", "version"});
    Model m;
    m.graph.name = req(root, "name");
    if (auto* d = root.attr("date")) m.graph.date = *d;
    if (auto* v = root.attr("version")) m.graph.version = *v;
    for (const auto& c : root.children) {
      if (c.name == "variable") {
        attrs(c, {"name"});
        m.graph.variables.push_back(req(c, "name"));
      } else if (c.name == "component") {
        attrs(c, {"id", "name", "role"});
        Component comp{req(c, "id"), req(c, "name"), {}};
        if (auto* r = c.attr("role")) comp.role = *r;
        if (!xml::is_nmtoken(comp.id)) fail(c, "component id is not a token");
        m.graph.components.push_back(std::move(comp));
      } else if (c.name == "map") {
        read_map(c, m.graph);
      } else if (c.name == "stub") {
        read_stub(c, m.graph);
      } else if (c.name == "scenariodef") {
        m.definitions.push_back(read_definition(c));
      } else {
        fail(c, "unexpected element <" + c.name + ">");
      }
    }
    return m;
  }

 private:
  [[noreturn]] static void fail(const xml::Element& e, const std::string& what, const std::string& id = {}) {
    throw Error(ErrorKind::validation, kUcmStage, "line " + std::to_string(e.line) + ": <" + e.name + ">: " + what, id);
  }
  static void attrs(const xml::Element& e, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : e.attributes) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(e, "unknown attribute '" + k + "'");
    }
  }
  static std::string req(const xml::Element& e, std::string_view key) {
    if (auto* v = e.attr(key)) return *v;
    fail(e, "missing required attribute '" + std::string(key) + "'");
  }
  static bool boolean(const xml::Element& e, std::string_view key, bool fallback) {
    auto* v = e.attr(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    fail(e, "attribute '" + std::string(key) + "' must be 'true' or 'false'");
  }

  static void read_map(const xml::Element& e, Graph& g) {
    attrs(e, {"id", "kind"});
    Map m{req(e, "id"), true};
    if (auto* k = e.attr("kind")) {
      if (*k == "plugin") m.root = false;
      else if (*k != "root") fail(e, "map kind must be 'root' or 'plugin'");
    }
    g.maps.push_back(m);
    for (const auto& c : e.children) {
      if (c.name == "node") {
        attrs(c, {"id", "kind", "name", "component"});
        Node n;
        n.id = req(c, "id");
        if (!xml::is_nmtoken(n.id)) fail(c, "node id is not a token", n.id);
        const std::string kind = req(c, "kind");
        bool known = false;
        for (const auto& [k, name] : kNodeKindNames)
          if (name == kind) {
            n.kind = k;
            known = true;
          }
        if (!known) fail(c, "unknown node kind '" + kind + "'", n.id);
        if (auto* nm = c.attr("name")) n.name = *nm;
        if (auto* comp = c.attr("component")) n.component = *comp;
        n.map = m.id;
        for (const auto& eff : c.children) {
          if (eff.name != "effect") fail(eff, "only <effect> may appear inside <node>", n.id);
          attrs(eff, {"var", "value"});
          n.effects.push_back({req(eff, "var"), boolean(eff, "value", true)});
        }
        g.nodes.push_back(std::move(n));
      } else if (c.name == "edge") {
        attrs(c, {"from", "to", "guard", "label", "segment", "timeout"});
        Edge ed;
        ed.from = req(c, "from");
        ed.to = req(c, "to");
        if (auto* gd = c.attr("guard")) ed.guard = Guard::parse(*gd, kUcmStage);
        if (auto* l = c.attr("label")) ed.label = *l;
        if (auto* s = c.attr("segment")) ed.segment = *s;
        ed.timeout = boolean(c, "timeout", false);
        g.edges.push_back(std::move(ed));
      } else {
        fail(c, "unexpected element <" + c.name + "> in <map>");
      }
    }
  }

  static void read_stub(const xml::Element& e, Graph& g) {
    attrs(e, {"node", "kind"});
    Stub s;
    s.node = req(e, "node");
    const std::string kind = e.attr("kind") ? *e.attr("kind") : "static";
    if (kind == "dynamic") s.kind = StubKind::dynamic_stub;
    else if (kind != "static") fail(e, "stub kind must be 'static' or 'dynamic'", s.node);
    for (const auto& c : e.children) {
      if (c.name != "plugin") fail(c, "only <plugin> may appear inside <stub>", s.node);
      attrs(c, {"map", "precondition"});
      Plugin p;
      p.map = req(c, "map");
      if (auto* pre = c.attr("precondition")) p.precondition = Guard::parse(*pre, kUcmStage);
      for (const auto& b : c.children) {
        if (b.name != "binding") fail(b, "only <binding> may appear inside <plugin>", s.node);
        attrs(b, {"in", "out", "start", "end"});
        Binding bd;
        if (b.attr("in") && b.attr("start") && !b.attr("out") && !b.attr("end")) {
          bd = {true, *b.attr("in"), *b.attr("start")};
        } else if (b.attr("out") && b.attr("end") && !b.attr("in") && !b.attr("start")) {
          bd = {false, *b.attr("out"), *b.attr("end")};
        } else {
          fail(b, "binding needs either in+start or out+end", s.node);
        }
        p.bindings.push_back(std::move(bd));
      }
      s.plugins.push_back(std::move(p));
    }
    g.stubs.push_back(std::move(s));
  }

  static ScenarioDefinition read_definition(const xml::Element& e) {
    attrs(e, {"id", "name"});
    ScenarioDefinition d;
    d.name = req(e, "name");
    d.id = e.attr("id") ? *e.attr("id") : sanitize_id(d.name);
    for (const auto& c : e.children) {
      if (c.name == "initial") {
        attrs(c, {"var", "value"});
        d.initial[req(c, "var")] = boolean(c, "value", false);
      } else if (c.name == "start") {
        attrs(c, {"node"});
        d.start_points.push_back(req(c, "node"));
      } else if (c.name == "postcondition") {
        attrs(c, {"var", "value"});
        d.postconditions.push_back({req(c, "var"), boolean(c, "value", true)});
      } else {
        fail(c, "unexpected element <" + c.name + "> in <scenariodef>");
      }
    }
    return d;
  }

  static std::string sanitize_id(const std::string& s) {
    std::string out;
    for (char c : s) out += xml::is_nmtoken(std::string(1, c)) ? c : '_';
    return out.empty() ? "def" : out;
  }
};

[[noreturn]] inline void invalid(const std::string& what, const std::string& id) {
  throw Error(ErrorKind::validation, kUcmStage, what, id);
}

inline void check_guard_vars(const Graph& g, const Guard& guard, const std::string& where) {
  for (const auto& v : guard.variables())
    if (!g.has_variable(v)) invalid("undeclared variable '" + v + "' in guard '" + guard.text() + "'", where);
}

}  // namespace detail

/// Structural validation of a parsed model; parse_ucm calls it.
inline void validate(const Model& m) {
  using detail::invalid;
  const Graph& g = m.graph;
  std::set<std::string> ids, maps, comps, vars;
  for (const auto& v : g.variables)
    if (!vars.insert(v).second) invalid("variable declared twice", v);
  for (const auto& c : g.components)
    if (!comps.insert(c.id).second) invalid("component declared twice", c.id);
  for (const auto& mp : g.maps)
    if (!maps.insert(mp.id).second) invalid("map declared twice", mp.id);
  for (const auto& n : g.nodes) {
    if (!ids.insert(n.id).second) invalid("node id used twice", n.id);
    if (n.component && !comps.count(*n.component)) invalid("node references undeclared component '" + *n.component + "'", n.id);
    for (const auto& e : n.effects)
      if (!vars.count(e.variable)) invalid("effect on undeclared variable '" + e.variable + "'", n.id);
    if (!n.effects.empty() && n.kind != NodeKind::resp) invalid("only responsibilities carry effects", n.id);
  }
  for (const auto& e : g.edges) {
    const Node* a = g.node(e.from);
    const Node* b = g.node(e.to);
    if (!a || !b) invalid("dangling edge " + e.from + " -> " + e.to, a ? e.to : e.from);
    if (a->map != b->map) invalid("edge " + e.from + " -> " + e.to + " crosses maps", e.from);
    detail::check_guard_vars(g, e.guard, e.from);
    if (!e.guard.text().empty() && a->kind != NodeKind::or_fork && a->kind != NodeKind::timer)
      invalid("guards are only allowed on or-fork and timer edges", e.from);
    if (e.timeout && a->kind != NodeKind::timer) invalid("timeout edge must leave a timer", e.from);
  }
  for (const auto& n : g.nodes) {
    const auto outs = g.out_edges(n.id);
    const auto in = g.in_degree(n.id);
    switch (n.kind) {
      case NodeKind::start:
        if (in != 0) invalid("start point has incoming edges", n.id);
        if (outs.size() != 1) invalid("start point needs exactly one outgoing edge", n.id);
        break;
      case NodeKind::end:
        if (!outs.empty()) invalid("end point has outgoing edges", n.id);
        break;
      case NodeKind::or_fork:
        if (outs.size() < 2) invalid("or-fork needs at least two outgoing edges", n.id);
        break;
      case NodeKind::and_fork:
        if (outs.size() < 2) invalid("and-fork needs at least two outgoing edges", n.id);
        break;
      case NodeKind::and_join:
        if (in < 2) invalid("and-join needs at least two incoming edges", n.id);
        if (outs.size() != 1) invalid("and-join needs exactly one outgoing edge", n.id);
        break;
      case NodeKind::timer: {
        std::size_t timeouts = 0;
        for (auto* e : outs) timeouts += e->timeout ? 1 : 0;
        if (outs.size() != 2 || timeouts != 1) invalid("timer needs one continuation and one timeout edge", n.id);
        break;
      }
      case NodeKind::stub:
        if (!g.stub(n.id)) invalid("stub node has no <stub> declaration", n.id);
        break;
      case NodeKind::resp:
      case NodeKind::or_join:
      case NodeKind::waiting_place:
        if (outs.size() != 1) invalid(std::string(to_string(n.kind)) + " needs exactly one outgoing edge", n.id);
        break;
    }
  }
  std::set<std::string> stub_nodes;
  for (const auto& s : g.stubs) {
    const Node* n = g.node(s.node);
    if (!n || n->kind != NodeKind::stub) invalid("<stub> refers to a node that is not a stub", s.node);
    if (!stub_nodes.insert(s.node).second) invalid("stub declared twice", s.node);
    if (s.plugins.empty()) invalid("unbound stub: no plug-in", s.node);
    if (s.kind == StubKind::static_stub && s.plugins.size() != 1)
      invalid("static stub must bind exactly one plug-in", s.node);
    for (const auto& p : s.plugins) {
      if (!maps.count(p.map)) invalid("plug-in map '" + p.map + "' is not declared", s.node);
      detail::check_guard_vars(g, p.precondition, s.node);
      bool has_in = false;
      for (const auto& b : p.bindings) {
        const Node* bn = g.node(b.node);
        if (!bn || bn->map != p.map) invalid("binding refers to '" + b.node + "' outside plug-in map " + p.map, s.node);
        if (b.in && bn->kind != NodeKind::start) invalid("IN binding must target a start point", b.node);
        if (!b.in && bn->kind != NodeKind::end) invalid("OUT binding must target an end point", b.node);
        has_in = has_in || b.in;
      }
      if (!has_in) invalid("unbound stub: plug-in '" + p.map + "' binds no IN segment", s.node);
    }
  }
  std::set<std::string> def_names;
  for (const auto& d : m.definitions) {
    if (!def_names.insert(d.name).second) invalid("scenario definition named twice", d.name);
    for (const auto& [v, val] : d.initial)
      if (!vars.count(v)) invalid("initial value for undeclared variable '" + v + "'", d.name);
    for (const auto& p : d.postconditions)
      if (!vars.count(p.variable)) invalid("postcondition on undeclared variable '" + p.variable + "'", d.name);
    if (d.start_points.empty()) invalid("scenario definition triggers no start point", d.name);
    for (const auto& sp : d.start_points) {
      const Node* n = g.node(sp);
      if (!n || n->kind != NodeKind::start) invalid("'" + sp + "' is not a start point", d.name);
    }
  }
}

inline Model parse_ucm(std::string_view text) {
  Model m = detail::Reader().read(xml::parse(text, kUcmStage));
  validate(m);
  return m;
}

}  // namespace ucmx::ucm
