// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ucmx/model.hpp"
#include "ucmx/synthesis.hpp"
#include "ucmx/xml.hpp"

namespace ucmx {

namespace detail {

inline constexpr const char* kSdStage = "emit-sd";
inline constexpr const char* kLayoutStage = "layout";
inline constexpr const char* kLayoutExtender = "ucmx-layout";

/// One emitted UML:Message, in emission order.
struct SdMessage {
  std::string xmi_id;
  std::string name;
  std::string sender;    // instance id
  std::string receiver;  // instance id
};

struct SdInteraction {
  std::string name;
  std::string collaboration_id;
  std::string interaction_id;
  std::vector<std::string> instances;  // lifeline order
  std::vector<std::string> role_ids;   // parallel to instances
  std::vector<SdMessage> messages;
};

/// Prepends the parallel label as first parameter: `n(p1.s1)`, or
/// `n(p1.s1, x)` when `n` already carries a parameter list.
inline std::string labelled_name(const std::string& name, const std::string& label) {
  if (label.empty()) return name;
  auto open = name.find('(');
  if (open != std::string::npos && !name.empty() && name.back() == ')') {
    std::string inner = name.substr(open + 1, name.size() - open - 2);
    return name.substr(0, open + 1) + label + (inner.empty() ? "" : ", " + inner) + ")";
  }
  return name + "(" + label + ")";
}

inline bool uses_env(const ScenarioDocument& doc, const MappingConfig& mapping) {
  bool env = false;
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (auto* d = n.get<Do>())
        env = env || (d->kind == EventKind::Start && mapping.start_point == EndpointMode::env_message) ||
              (d->kind == EventKind::End_Point && mapping.end_point == EndpointMode::env_message);
    });
  });
  return env;
}

/// The interactions emit_xmi writes for `doc`; shared with the layout pass so
/// both agree on element ids and order.
inline std::vector<SdInteraction> plan_interactions(const ScenarioDocument& doc, const MappingConfig& mapping) {
  std::vector<std::string> lifelines;
  for (const auto& i : doc.instances) lifelines.push_back(i.id);
  if (uses_env(doc, mapping) && !doc.find_instance(kEnvId)) lifelines.push_back(std::string(kEnvId));

  std::vector<SdInteraction> out;
  int k = 0;
  doc.for_each_scenario([&](const Scenario& s) {
    ++k;
    const std::string prefix = "s" + std::to_string(k) + "_";
    SdInteraction in;
    in.name = s.name;
    in.collaboration_id = prefix + "collab";
    in.interaction_id = prefix + "interaction";
    in.instances = lifelines;
    for (std::size_t i = 0; i < lifelines.size(); ++i) in.role_ids.push_back(prefix + "r" + std::to_string(i + 1));

    auto labels = par_labels(s.body);
    std::size_t leaf = 0;
    auto add = [&](std::string name, std::string from, std::string to) {
      SdMessage m;
      m.xmi_id = prefix + "e" + std::to_string(in.messages.size() + 1);
      m.name = labelled_name(name, labels[leaf]);
      m.sender = std::move(from);
      m.receiver = std::move(to);
      in.messages.push_back(std::move(m));
    };
    visit_nodes(s.body, [&](const Node& n) {
      if (!n.is_leaf()) return;
      if (auto* m = n.get<Message>()) {
        add(m->name, m->source_id, m->destination_id);
      } else if (auto* d = n.get<Do>(); d && is_message_relevant(d->kind)) {
        const std::string owner = owner_of(*d);
        const std::string name = d->name && !d->name->empty() ? *d->name : d->hyperedge_id;
        if (d->kind == EventKind::Start && mapping.start_point == EndpointMode::env_message)
          add(name, std::string(kEnvId), owner);
        else if (d->kind == EventKind::End_Point && mapping.end_point == EndpointMode::env_message)
          add(name, owner, std::string(kEnvId));
        else
          add(name, owner, owner);
      }
      ++leaf;
    });
    out.push_back(std::move(in));
  });
  return out;
}

inline const std::string& role_of(const SdInteraction& in, const std::string& inst) {
  for (std::size_t i = 0; i < in.instances.size(); ++i)
    if (in.instances[i] == inst) return in.role_ids[i];
  throw Error(ErrorKind::precondition, kSdStage, "message references undeclared instance '" + inst + "'", inst);
}

}  // namespace detail

/// UML 1.x sequence-diagram subset: one collaboration with one interaction per
/// scenario. Messages appear in document order, which is a linear extension of
/// the scenario's partial order; concurrency survives only in the `(pN.sM)`
/// label carried by each message name.
inline std::string emit_xmi(const ScenarioDocument& doc, const MappingConfig& mapping = {}) {
  validate_structure(doc);
  auto plan = detail::plan_interactions(doc, mapping);

  xml::Writer w;
  w.open("XMI", {{"xmi.version", "1.2"}, {"xmlns:UML", "org.omg.xmi.namespace.UML"}});
  w.open("XMI.header");
  w.open("XMI.documentation");
  w.text_element("XMI.exporter", "ucmx");
  w.close("XMI.documentation");
  w.close("XMI.header");
  w.open("XMI.content");
  w.open("UML:Model", {{"xmi.id", "model"}, {"name", doc.design_name.value_or("UcmScenarios")}});
  w.open("UML:Namespace.ownedElement");
  for (const auto& in : plan) {
    w.open("UML:Collaboration", {{"xmi.id", in.collaboration_id}, {"name", in.name}});
    w.open("UML:Namespace.ownedElement");
    for (std::size_t i = 0; i < in.instances.size(); ++i)
      w.empty("UML:ClassifierRole", {{"xmi.id", in.role_ids[i]}, {"name", instance_name(doc, in.instances[i])}});
    w.close("UML:Namespace.ownedElement");
    w.open("UML:Collaboration.interaction");
    if (in.messages.empty()) {
      w.empty("UML:Interaction", {{"xmi.id", in.interaction_id}, {"name", in.name}});
    } else {
      w.open("UML:Interaction", {{"xmi.id", in.interaction_id}, {"name", in.name}});
      w.open("UML:Interaction.message");
      for (const auto& m : in.messages) {
        w.open("UML:Message", {{"xmi.id", m.xmi_id},
                               {"name", m.name},
                               {"sender", detail::role_of(in, m.sender)},
                               {"receiver", detail::role_of(in, m.receiver)}});
        w.open("UML:Message.action");
        w.empty("UML:CallAction", {{"xmi.id", m.xmi_id + "_action"}, {"name", m.name}});
        w.close("UML:Message.action");
        w.close("UML:Message");
      }
      w.close("UML:Interaction.message");
      w.close("UML:Interaction");
    }
    w.close("UML:Collaboration.interaction");
    w.close("UML:Collaboration");
  }
  w.close("UML:Namespace.ownedElement");
  w.close("UML:Model");
  w.close("XMI.content");
  w.close("XMI");
  return std::move(w).str();
}

/// Horizontal position of the i-th lifeline (0-based), in abstract units.
inline int lifeline_x(std::size_t i) { return 60 + 140 * static_cast<int>(i); }

/// Inserts an `XMI.extensions` section carrying lifeline positions and event
/// ranks just before `</XMI>`. Every other byte of the input is kept.
inline std::string add_layout_hints(const std::string& xmi, const ScenarioDocument& doc,
                                    const MappingConfig& mapping = {}) {
  const xml::Element root = xml::parse(xmi, detail::kLayoutStage);
  if (root.name != "XMI") throw Error(ErrorKind::consistency, detail::kLayoutStage, "input is not an XMI document");

  std::set<std::string> ids;
  bool has_extension = false;
  auto collect = [&](auto&& self, const xml::Element& e) -> void {
    if (e.name == "XMI.extensions") has_extension = true;
    if (auto* id = e.attr("xmi.id")) ids.insert(*id);
    for (const auto& c : e.children) self(self, c);
  };
  collect(collect, root);
  if (has_extension)
    throw Error(ErrorKind::precondition, detail::kLayoutStage, "input already contains an extension section");

  auto plan = detail::plan_interactions(doc, mapping);
  auto require = [&](const std::string& id) {
    if (!ids.count(id))
      throw Error(ErrorKind::consistency, detail::kLayoutStage, "element id not found in XMI input", id);
  };

  std::string ext = "  <XMI.extensions xmi.extender=\"" + std::string(detail::kLayoutExtender) + "\">\n";
  for (const auto& in : plan) {
    require(in.interaction_id);
    ext += "    <layout interaction=\"" + in.interaction_id + "\">\n";
    for (std::size_t i = 0; i < in.role_ids.size(); ++i) {
      require(in.role_ids[i]);
      ext += "      <lifeline ref=\"" + in.role_ids[i] + "\" x=\"" + std::to_string(lifeline_x(i)) + "\"/>\n";
    }
    for (std::size_t r = 0; r < in.messages.size(); ++r) {
      require(in.messages[r].xmi_id);
      ext += "      <event ref=\"" + in.messages[r].xmi_id + "\" rank=\"" + std::to_string(r + 1) + "\"/>\n";
    }
    ext += "    </layout>\n";
  }
  ext += "  </XMI.extensions>\n";

  auto at = xmi.rfind("</XMI>");
  if (at == std::string::npos)
    throw Error(ErrorKind::consistency, detail::kLayoutStage, "closing </XMI> tag not found");
  return xmi.substr(0, at) + ext + xmi.substr(at);
}

/// Removes the layout extension section, restoring the base XMI bytes.
inline std::string strip_layout_hints(const std::string& xmi) {
  auto b = xmi.find("  <XMI.extensions xmi.extender=\"" + std::string(detail::kLayoutExtender) + "\">\n");
  if (b == std::string::npos) return xmi;
  const std::string close = "  </XMI.extensions>\n";
  auto e = xmi.find(close, b);
  if (e == std::string::npos) return xmi;
  return xmi.substr(0, b) + xmi.substr(e + close.size());
}

}  // namespace ucmx
