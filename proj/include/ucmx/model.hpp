// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucmx/error.hpp"

namespace ucmx {

/// Reserved pseudo-instance standing for the environment. Events without a
/// component are attributed to it.
inline constexpr std::string_view kEnvId = "__env__";
inline constexpr std::string_view kEnvName = "Env";

enum class EventKind {
  Resp,
  Start,
  End_Point,
  WP_Enter,
  WP_Leave,
  Connect_Start,
  Connect_End,
  Trigger_End,
  Timer_Set,
  Timer_Reset,
  Timeout,
};

inline constexpr std::array<std::pair<EventKind, std::string_view>, 11> kEventKindNames{{
    {EventKind::Resp, "Resp"},
    {EventKind::Start, "Start"},
    {EventKind::End_Point, "End_Point"},
    {EventKind::WP_Enter, "WP_Enter"},
    {EventKind::WP_Leave, "WP_Leave"},
    {EventKind::Connect_Start, "Connect_Start"},
    {EventKind::Connect_End, "Connect_End"},
    {EventKind::Trigger_End, "Trigger_End"},
    {EventKind::Timer_Set, "Timer_Set"},
    {EventKind::Timer_Reset, "Timer_Reset"},
    {EventKind::Timeout, "Timeout"},
}};

inline std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventKindNames)
    if (kind == k) return name;
  return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kEventKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

/// Plug-in boundary markers carry traceability only and are invisible to
/// message synthesis.
inline bool is_message_relevant(EventKind k) {
  return k != EventKind::Connect_Start && k != EventKind::Connect_End &&
         k != EventKind::Trigger_End;
}

inline bool is_timer_kind(EventKind k) {
  return k == EventKind::Timer_Set || k == EventKind::Timer_Reset || k == EventKind::Timeout;
}

/// One traversed UCM node.
struct Do {
  std::string hyperedge_id;
  std::optional<std::string> name;
  EventKind kind = EventKind::Resp;
  std::string description;
  std::optional<std::string> component_name;
  std::optional<std::string> component_role;
  std::optional<std::string> component_id;

  bool operator==(const Do&) const = default;
};

struct Condition {
  std::string hyperedge_id;
  std::string label;
  std::optional<std::string> expression;

  bool operator==(const Condition&) const = default;
};

/// A synthesized sender -> receiver communication.
struct Message {
  std::string id;
  std::string name;
  std::string source_id;
  std::string destination_id;
  bool is_task = false;
  bool is_timer = false;
  std::string timer_property;
  std::string last_ref;
  std::optional<std::string> description;
  std::string para_label;
  bool is_connector = false;
  std::string connector_type;  // intra-seq | pre-par | post-par

  bool operator==(const Message&) const = default;
};

struct Node;

struct Seq {
  std::vector<Node> children;
};

struct Par {
  std::vector<Node> children;
};

struct Node {
  using Value = std::variant<Do, Condition, Message, Seq, Par>;
  Value value;

  Node() : value(Seq{}) {}
  template <class T>
    requires std::is_constructible_v<Value, T&&> && (!std::is_same_v<std::decay_t<T>, Node>)
  Node(T&& v) : value(std::forward<T>(v)) {}

  template <class T>
  bool is() const { return std::holds_alternative<T>(value); }
  template <class T>
  T& as() { return std::get<T>(value); }
  template <class T>
  const T& as() const { return std::get<T>(value); }
  template <class T>
  T* get() { return std::get_if<T>(&value); }
  template <class T>
  const T* get() const { return std::get_if<T>(&value); }

  bool is_leaf() const { return !is<Seq>() && !is<Par>(); }
  bool is_block() const { return is<Seq>() || is<Par>(); }
};

inline bool operator==(const Seq& a, const Seq& b) { return a.children == b.children; }
inline bool operator==(const Par& a, const Par& b) { return a.children == b.children; }
inline bool operator==(const Node& a, const Node& b) { return a.value == b.value; }

/// Children of a block node, or an empty span for leaves.
inline std::vector<Node>* children_of(Node& n) {
  if (auto* s = n.get<Seq>()) return &s->children;
  if (auto* p = n.get<Par>()) return &p->children;
  return nullptr;
}
inline const std::vector<Node>* children_of(const Node& n) {
  if (auto* s = n.get<Seq>()) return &s->children;
  if (auto* p = n.get<Par>()) return &p->children;
  return nullptr;
}

struct Scenario {
  std::optional<std::string> definition_id;
  std::string name;
  std::optional<std::string> description;
  Node body = Seq{};

  bool operator==(const Scenario&) const = default;
};

struct Group {
  std::optional<std::string> group_id;
  std::string name;
  std::optional<std::string> description;
  std::vector<Scenario> scenarios;

  bool operator==(const Group&) const = default;
};

struct ComponentInstance {
  std::string id;
  std::string name;
  std::optional<std::string> role;

  bool operator==(const ComponentInstance&) const = default;
};

struct ScenarioDocument {
  std::string date;
  std::string ucm_file;
  std::optional<std::string> design_name;
  std::string ucm_design_version;
  std::vector<Group> groups;
  std::vector<ComponentInstance> instances;

  bool operator==(const ScenarioDocument&) const = default;

  const ComponentInstance* find_instance(std::string_view id) const {
    for (const auto& i : instances)
      if (i.id == id) return &i;
    return nullptr;
  }

  template <class F>
  void for_each_scenario(F&& f) {
    for (auto& g : groups)
      for (auto& s : g.scenarios) f(s);
  }
  template <class F>
  void for_each_scenario(F&& f) const {
    for (const auto& g : groups)
      for (const auto& s : g.scenarios) f(s);
  }
};

/// Instance id owning an event; unallocated events belong to the environment.
inline std::string owner_of(const Do& d) {
  return d.component_id ? *d.component_id : std::string(kEnvId);
}

/// Display name of an instance id within a document.
inline std::string instance_name(const ScenarioDocument& doc, std::string_view id) {
  if (auto* inst = doc.find_instance(id)) return inst->name;
  if (id == kEnvId) return std::string(kEnvName);
  return std::string(id);
}

/// Stable identifier of a leaf: hyperedge id for events and conditions,
/// message id for messages.
inline const std::string& leaf_id(const Node& n) {
  if (auto* d = n.get<Do>()) return d->hyperedge_id;
  if (auto* c = n.get<Condition>()) return c->hyperedge_id;
  return n.as<Message>().id;
}

/// Replaces every character outside [A-Za-z0-9_] with '_'. A multi-byte
/// UTF-8 sequence counts as one character.
inline std::string sanitize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      out.push_back(static_cast<char>(c));
    } else if (c >= 0x80) {
      out.push_back('_');
      while (i + 1 < s.size() && (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80) ++i;
    } else {
      out.push_back('_');
    }
  }
  return out;
}

/// Checks the seq/par alternation invariant below a scenario body.
inline void validate_structure(const Node& body, std::string_view where = {}) {
  if (!body.is_block())
    throw Error(ErrorKind::structure, "scenario-model", "scenario body must be a seq or par",
                std::string(where));
  auto rec = [&](auto&& self, const Node& n) -> void {
    const auto* kids = children_of(n);
    if (!kids) return;
    for (const auto& c : *kids) {
      if (n.is<Seq>() && c.is<Seq>())
        throw Error(ErrorKind::structure, "scenario-model", "seq directly contains seq",
                    std::string(where));
      if (n.is<Par>() && c.is<Par>())
        throw Error(ErrorKind::structure, "scenario-model", "par directly contains par",
                    std::string(where));
      self(self, c);
    }
  };
  rec(rec, body);
}

inline void validate_structure(const ScenarioDocument& doc) {
  doc.for_each_scenario([](const Scenario& s) { validate_structure(s.body, s.name); });
}

/// Depth-first visit of every node (pre-order), mutable.
template <class F>
void visit_nodes(Node& n, F&& f) {
  f(n);
  if (auto* kids = children_of(n))
    for (auto& c : *kids) visit_nodes(c, f);
}
template <class F>
void visit_nodes(const Node& n, F&& f) {
  f(n);
  if (auto* kids = children_of(n))
    for (const auto& c : *kids) visit_nodes(c, f);
}

}  // namespace ucmx
