// SPDX-License-Identifier: Apache-2.0
// Small builders shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ucmx/ucmx.hpp"

namespace th {

inline std::string fixture_path(const std::string& name) { return std::string(UCMX_FIXTURES) + "/" + name; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return read_text(fixture_path(name)); }

inline std::vector<std::string> fixtures_with_suffix(const std::string& suffix) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(UCMX_FIXTURES)) {
    std::string n = e.path().filename().string();
    if (n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ucmx::Node ev(const std::string& id, std::optional<std::string> comp = std::nullopt,
                     ucmx::EventKind kind = ucmx::EventKind::Resp) {
  ucmx::Do d;
  d.hyperedge_id = id;
  d.name = id;
  d.kind = kind;
  if (comp) {
    d.component_id = *comp;
    d.component_name = *comp;
  }
  return d;
}

inline ucmx::Node cond(const std::string& id, const std::string& label) {
  ucmx::Condition c;
  c.hyperedge_id = id;
  c.label = label;
  return c;
}

inline ucmx::Node seq(std::initializer_list<ucmx::Node> kids) { return ucmx::Seq{std::vector<ucmx::Node>(kids)}; }
inline ucmx::Node par(std::initializer_list<ucmx::Node> kids) { return ucmx::Par{std::vector<ucmx::Node>(kids)}; }

inline ucmx::ScenarioDocument doc_of(std::vector<ucmx::Node> bodies, const std::string& design = "Test") {
  ucmx::ScenarioDocument d;
  d.date = "2005-01-01";
  d.ucm_file = "test.ucm";
  d.design_name = design;
  d.ucm_design_version = "1";
  ucmx::Group g;
  g.name = "g";
  int k = 0;
  for (auto& b : bodies) {
    ucmx::Scenario s;
    s.name = "s" + std::to_string(++k);
    s.body = std::move(b);
    g.scenarios.push_back(std::move(s));
  }
  d.groups.push_back(std::move(g));
  return d;
}

inline std::vector<const ucmx::Message*> messages(const ucmx::Node& body) {
  std::vector<const ucmx::Message*> out;
  ucmx::visit_nodes(body, [&](const ucmx::Node& n) {
    if (auto* m = n.get<ucmx::Message>()) out.push_back(m);
  });
  return out;
}

inline std::vector<const ucmx::Message*> messages(const ucmx::ScenarioDocument& doc) {
  std::vector<const ucmx::Message*> out;
  doc.for_each_scenario([&](const ucmx::Scenario& s) {
    for (auto* m : messages(s.body)) out.push_back(m);
  });
  return out;
}

/// "SRC->DST" edges of the connector messages, sorted.
inline std::vector<std::string> connector_edges(const ucmx::ScenarioDocument& doc) {
  std::vector<std::string> out;
  for (auto* m : messages(doc))
    if (m->is_connector) out.push_back(m->source_id + "->" + m->destination_id);
  std::sort(out.begin(), out.end());
  return out;
}

inline const ucmx::Message* find_message(const ucmx::ScenarioDocument& doc, const std::string& name) {
  for (auto* m : messages(doc))
    if (m->name == name) return m;
  return nullptr;
}

inline ucmx::ScenarioDocument parse(const std::string& xml) {
  return ucmx::parse_scenarios(xml, ucmx::FormatVariant::Enriched);
}

}  // namespace th
