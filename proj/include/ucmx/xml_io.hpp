// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <string_view>

#include "ucmx/model.hpp"
#include "ucmx/xml.hpp"

namespace ucmx {

/// Plain is the traversal output schema; Enriched adds the instance list and
/// message elements and accepts every Plain document.
enum class FormatVariant { Plain, Enriched };

namespace detail {

inline constexpr const char* kXmlStage = "xml-io";

class ScenarioReader {
 public:
  explicit ScenarioReader(FormatVariant v) : variant_(v) {}

  ScenarioDocument read(const xml::Element& root) {
    if (root.name != "scenarios") fail(root, "root element must be <scenarios>, found <" + root.name + ">");
    check_attrs(root, {"date", "ucm-file", "design-name", "ucm-design-version"});
    ScenarioDocument doc;
    doc.date = required(root, "date");
    doc.ucm_file = required(root, "ucm-file");
    doc.design_name = optional(root, "design-name");
    doc.ucm_design_version = required(root, "ucm-design-version");
    no_text(root);

    bool seen_group = false;
    bool seen_instances = false;
    for (const auto& c : root.children) {
      if (c.name == "instances") {
        if (variant_ == FormatVariant::Plain) fail(c, "<instances> is not allowed in plain documents");
        if (seen_instances || seen_group) fail(c, "<instances> must appear once, before any <group>");
        seen_instances = true;
        read_instances(c, doc);
      } else if (c.name == "group") {
        seen_group = true;
        doc.groups.push_back(read_group(c));
      } else {
        fail(c, "unexpected element <" + c.name + "> in <scenarios>");
      }
    }
    if (seen_instances) check_references(doc);
    return doc;
  }

 private:
  [[noreturn]] void fail(const xml::Element& e, const std::string& what, const std::string& id = {}) const {
    throw Error(ErrorKind::validation, kXmlStage,
                "line " + std::to_string(e.line) + ": <" + e.name + ">: " + what, id);
  }

  void check_attrs(const xml::Element& e, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : e.attributes) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(e, "unknown attribute '" + k + "'");
    }
  }

  std::string required(const xml::Element& e, std::string_view key) const {
    if (auto* v = e.attr(key)) return *v;
    fail(e, "missing required attribute '" + std::string(key) + "'");
  }

  static std::optional<std::string> optional(const xml::Element& e, std::string_view key) {
    if (auto* v = e.attr(key)) return *v;
    return std::nullopt;
  }

  std::string token(const xml::Element& e, std::string_view key) const {
    auto v = required(e, key);
    if (!xml::is_nmtoken(v)) fail(e, "attribute '" + std::string(key) + "' is not a token: '" + v + "'");
    return v;
  }

  std::optional<std::string> optional_token(const xml::Element& e, std::string_view key) const {
    auto v = optional(e, key);
    if (v && !xml::is_nmtoken(*v))
      fail(e, "attribute '" + std::string(key) + "' is not a token: '" + *v + "'");
    return v;
  }

  bool boolean(const xml::Element& e, std::string_view key) const {
    auto v = required(e, key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(e, "attribute '" + std::string(key) + "' must be 'true' or 'false', found '" + v + "'");
  }

  void no_text(const xml::Element& e) const {
    if (!xml::is_blank(e.text)) fail(e, "character data is not allowed here");
  }

  void leaf(const xml::Element& e) const {
    no_text(e);
    if (!e.children.empty()) fail(e, "element must be empty");
  }

  void read_instances(const xml::Element& e, ScenarioDocument& doc) {
    check_attrs(e, {});
    no_text(e);
    std::set<std::string> ids;
    for (const auto& c : e.children) {
      if (c.name != "instance") fail(c, "unexpected element <" + c.name + "> in <instances>");
      check_attrs(c, {"instance-id", "name", "role"});
      leaf(c);
      ComponentInstance inst{token(c, "instance-id"), required(c, "name"), optional(c, "role")};
      if (!ids.insert(inst.id).second) fail(c, "duplicate instance-id", inst.id);
      doc.instances.push_back(std::move(inst));
    }
  }

  Group read_group(const xml::Element& e) {
    check_attrs(e, {"group-id", "name", "description"});
    no_text(e);
    Group g;
    g.group_id = optional_token(e, "group-id");
    g.name = required(e, "name");
    if (g.name.empty()) fail(e, "group name must be non-empty");
    g.description = optional(e, "description");
    for (const auto& c : e.children) {
      if (c.name != "scenario") fail(c, "unexpected element <" + c.name + "> in <group>");
      g.scenarios.push_back(read_scenario(c));
    }
    return g;
  }

  Scenario read_scenario(const xml::Element& e) {
    check_attrs(e, {"scenario-definition-id", "name", "description"});
    no_text(e);
    Scenario s;
    s.definition_id = optional_token(e, "scenario-definition-id");
    s.name = required(e, "name");
    s.description = optional(e, "description");
    if (e.children.size() != 1 || (e.children[0].name != "seq" && e.children[0].name != "par"))
      fail(e, "scenario must contain exactly one <seq> or <par>", s.name);
    s.body = read_block(e.children[0]);
    return s;
  }

  Node read_block(const xml::Element& e) {
    check_attrs(e, {});
    no_text(e);
    const bool is_seq = e.name == "seq";
    std::vector<Node> kids;
    for (const auto& c : e.children) {
      if (c.name == "do") {
        kids.emplace_back(read_do(c));
      } else if (c.name == "condition") {
        kids.emplace_back(read_condition(c));
      } else if (c.name == "message") {
        if (variant_ == FormatVariant::Plain) fail(c, "<message> is not allowed in plain documents");
        kids.emplace_back(read_message(c));
      } else if (c.name == (is_seq ? "par" : "seq")) {
        kids.push_back(read_block(c));
      } else {
        fail(c, "unexpected element <" + c.name + "> in <" + e.name + ">");
      }
    }
    if (is_seq) return Seq{std::move(kids)};
    return Par{std::move(kids)};
  }

  Do read_do(const xml::Element& e) {
    check_attrs(e, {"hyperedge-id", "name", "type", "description", "component-name", "component-role",
                    "component-id"});
    leaf(e);
    Do d;
    d.hyperedge_id = token(e, "hyperedge-id");
    d.name = optional(e, "name");
    auto type = required(e, "type");
    auto kind = parse_event_kind(type);
    if (!kind) fail(e, "attribute 'type' has unknown value '" + type + "'", d.hyperedge_id);
    d.kind = *kind;
    d.description = optional(e, "description").value_or("");
    d.component_name = optional(e, "component-name");
    d.component_role = optional(e, "component-role");
    d.component_id = optional_token(e, "component-id");
    if (d.component_name.has_value() != d.component_id.has_value())
      fail(e, "component-name and component-id must be both present or both absent", d.hyperedge_id);
    return d;
  }

  Condition read_condition(const xml::Element& e) {
    check_attrs(e, {"hyperedge-id", "label", "expression"});
    leaf(e);
    Condition c;
    c.hyperedge_id = token(e, "hyperedge-id");
    c.label = required(e, "label");
    if (c.label.empty()) fail(e, "condition label must be non-empty", c.hyperedge_id);
    c.expression = optional(e, "expression");
    return c;
  }

  Message read_message(const xml::Element& e) {
    check_attrs(e, {"id", "name", "source-id", "destination-id", "is-task", "is-timer", "timer-property",
                    "last-ref", "description", "para-label", "is-connector", "connector-type"});
    leaf(e);
    Message m;
    m.id = token(e, "id");
    if (!message_ids_.insert(m.id).second) fail(e, "duplicate message id", m.id);
    m.name = required(e, "name");
    m.source_id = required(e, "source-id");
    m.destination_id = required(e, "destination-id");
    m.is_task = boolean(e, "is-task");
    m.is_timer = boolean(e, "is-timer");
    m.timer_property = required(e, "timer-property");
    m.last_ref = required(e, "last-ref");
    m.description = optional(e, "description");
    m.para_label = required(e, "para-label");
    m.is_connector = boolean(e, "is-connector");
    m.connector_type = optional(e, "connector-type").value_or("");
    if (m.is_connector && m.connector_type != "pre-par" && m.connector_type != "post-par")
      fail(e, "connector messages need connector-type pre-par or post-par", m.id);
    return m;
  }

  void check_references(const ScenarioDocument& doc) const {
    auto known = [&](const std::string& id) { return doc.find_instance(id) != nullptr; };
    doc.for_each_scenario([&](const Scenario& s) {
      visit_nodes(s.body, [&](const Node& n) {
        if (auto* d = n.get<Do>()) {
          if (!known(owner_of(*d)))
            throw Error(ErrorKind::validation, kXmlStage,
                        "event references undeclared instance '" + owner_of(*d) + "'", d->hyperedge_id);
        } else if (auto* m = n.get<Message>()) {
          if (!known(m->source_id) || !known(m->destination_id))
            throw Error(ErrorKind::validation, kXmlStage, "message endpoint is not a declared instance", m->id);
        }
      });
    });
  }

  FormatVariant variant_;
  std::set<std::string> message_ids_;
};

class ScenarioWriter {
 public:
  explicit ScenarioWriter(FormatVariant v) : variant_(v) {}

  std::string write(const ScenarioDocument& doc) {
    xml::Attrs root{{"date", doc.date}, {"ucm-file", doc.ucm_file}};
    if (doc.design_name) root.emplace_back("design-name", *doc.design_name);
    root.emplace_back("ucm-design-version", doc.ucm_design_version);
    const bool has_content = !doc.groups.empty() || !doc.instances.empty();
    if (!has_content) {
      w_.empty("scenarios", root);
      return std::move(w_).str();
    }
    w_.open("scenarios", root);
    if (!doc.instances.empty()) {
      w_.open("instances");
      for (const auto& i : doc.instances) {
        xml::Attrs a{{"instance-id", i.id}, {"name", i.name}};
        if (i.role) a.emplace_back("role", *i.role);
        w_.empty("instance", a);
      }
      w_.close("instances");
    }
    for (const auto& g : doc.groups) {
      xml::Attrs a;
      if (g.group_id) a.emplace_back("group-id", *g.group_id);
      a.emplace_back("name", g.name);
      if (g.description) a.emplace_back("description", *g.description);
      if (g.scenarios.empty()) {
        w_.empty("group", a);
        continue;
      }
      w_.open("group", a);
      for (const auto& s : g.scenarios) {
        xml::Attrs sa;
        if (s.definition_id) sa.emplace_back("scenario-definition-id", *s.definition_id);
        sa.emplace_back("name", s.name);
        if (s.description) sa.emplace_back("description", *s.description);
        w_.open("scenario", sa);
        node(s.body);
        w_.close("scenario");
      }
      w_.close("group");
    }
    w_.close("scenarios");
    return std::move(w_).str();
  }

 private:
  static const char* b(bool v) { return v ? "true" : "false"; }

  void node(const Node& n) {
    if (auto* d = n.get<Do>()) {
      xml::Attrs a{{"hyperedge-id", d->hyperedge_id}};
      if (d->name) a.emplace_back("name", *d->name);
      a.emplace_back("type", std::string(to_string(d->kind)));
      a.emplace_back("description", d->description);
      if (d->component_name) a.emplace_back("component-name", *d->component_name);
      if (d->component_role) a.emplace_back("component-role", *d->component_role);
      if (d->component_id) a.emplace_back("component-id", *d->component_id);
      w_.empty("do", a);
    } else if (auto* c = n.get<Condition>()) {
      xml::Attrs a{{"hyperedge-id", c->hyperedge_id}, {"label", c->label}};
      if (c->expression) a.emplace_back("expression", *c->expression);
      w_.empty("condition", a);
    } else if (auto* m = n.get<Message>()) {
      xml::Attrs a{{"id", m->id},
                   {"name", m->name},
                   {"source-id", m->source_id},
                   {"destination-id", m->destination_id},
                   {"is-task", b(m->is_task)},
                   {"is-timer", b(m->is_timer)},
                   {"timer-property", m->timer_property},
                   {"last-ref", m->last_ref}};
      if (m->description) a.emplace_back("description", *m->description);
      a.emplace_back("para-label", m->para_label);
      a.emplace_back("is-connector", b(m->is_connector));
      if (!m->connector_type.empty()) a.emplace_back("connector-type", m->connector_type);
      w_.empty("message", a);
    } else {
      const char* tag = n.is<Seq>() ? "seq" : "par";
      const auto& kids = *children_of(n);
      if (kids.empty()) {
        w_.empty(tag);
        return;
      }
      w_.open(tag);
      for (const auto& k : kids) node(k);
      w_.close(tag);
    }
  }

  FormatVariant variant_;
  xml::Writer w_;
};

}  // namespace detail

/// Parses and validates a scenario document.
inline ScenarioDocument parse_scenarios(std::string_view text, FormatVariant variant) {
  auto root = xml::parse(text, detail::kXmlStage);
  return detail::ScenarioReader(variant).read(root);
}

/// Canonical serialization: DTD attribute order, two-space indentation, LF.
inline std::string write_document(const ScenarioDocument& doc, FormatVariant variant) {
  validate_structure(doc);
  if (variant == FormatVariant::Plain) {
    if (!doc.instances.empty())
      throw Error(ErrorKind::precondition, detail::kXmlStage, "plain variant cannot carry an instance list");
    doc.for_each_scenario([](const Scenario& s) {
      visit_nodes(s.body, [&](const Node& n) {
        if (n.is<Message>())
          throw Error(ErrorKind::precondition, detail::kXmlStage, "plain variant cannot carry messages",
                      n.as<Message>().id);
      });
    });
  }
  std::set<std::string> ids;
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (auto* m = n.get<Message>(); m && !ids.insert(m->id).second)
        throw Error(ErrorKind::validation, detail::kXmlStage, "duplicate message id", m->id);
    });
  });
  return detail::ScenarioWriter(variant).write(doc);
}

}  // namespace ucmx
