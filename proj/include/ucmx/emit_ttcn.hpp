// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ucmx/emit_msc.hpp"
#include "ucmx/model.hpp"

namespace ucmx {

namespace detail {

inline constexpr const char* kTtcnStage = "emit-ttcn";

// TTCN-3 identifiers start with a letter.
inline std::string ttcn_identifier(const std::string& raw, const std::string& fallback) {
  std::string s = sanitize(raw);
  if (s.empty()) return fallback;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) s = "U" + s;
  return s;
}

inline std::string comment_text(const std::string& s) {
  std::string out;
  for (char c : s) out += (c == '\n' || c == '\r') ? ' ' : c;
  return out;
}

class TtcnEmitter {
 public:
  explicit TtcnEmitter(const ScenarioDocument& doc) : doc_(doc) {}

  std::string emit() {
    std::vector<std::string> raw;
    doc_.for_each_scenario([&](const Scenario& s) { raw.push_back(s.name); });
    auto names = unique_identifiers(raw, "scenario");
    for (auto& n : names) n = "tc_" + n;

    line(0, "module " + ttcn_identifier(doc_.design_name.value_or(""), "UcmScenarios") + " {");
    blank();
    line(1, "type port UcmPort message {");
    line(2, "inout charstring;");
    line(1, "}");
    blank();
    line(1, "type component MTC {");
    line(2, "port UcmPort ucmPort;");
    line(2, "timer guardTimer := 5.0;");
    line(1, "}");
    blank();
    line(1, "altstep as_guard() runs on MTC {");
    line(2, "[] guardTimer.timeout {");
    line(3, "setverdict(fail);");
    line(3, "stop;");
    line(2, "}");
    line(1, "}");

    std::size_t k = 0;
    doc_.for_each_scenario([&](const Scenario& s) { testcase(s, names[k++]); });

    blank();
    line(1, "control {");
    for (const auto& n : names) line(2, "execute(" + n + "());");
    line(1, "}");
    line(0, "}");
    return out_;
  }

 private:
  void line(int depth, const std::string& s) { out_ += std::string(static_cast<std::size_t>(depth) * 2, ' ') + s + "\n"; }
  void blank() { out_ += "\n"; }

  static std::string payload(const Do& d) {
    std::string s = sanitize(d.name && !d.name->empty() ? *d.name : d.hyperedge_id);
    return "\"" + s + "\"";
  }

  void testcase(const Scenario& s, const std::string& name) {
    bool has_end = false, has_any = false;
    visit_nodes(s.body, [&](const Node& n) {
      if (n.is_leaf()) has_any = true;
      if (auto* d = n.get<Do>(); d && d->kind == EventKind::End_Point) has_end = true;
    });
    blank();
    line(1, "testcase " + name + "() runs on MTC {");
    if (has_end) {
      line(2, "var default d_guard := activate(as_guard());");
      line(2, "guardTimer.start;");
    }
    if (has_any) visit_nodes(s.body, [&](const Node& n) { leaf(n); });
    if (has_end) {
      line(2, "guardTimer.stop;");
      line(2, "deactivate(d_guard);");
    } else {
      line(2, "setverdict(pass);");
    }
    line(1, "}");
  }

  void leaf(const Node& n) {
    if (auto* d = n.get<Do>()) {
      switch (d->kind) {
        case EventKind::Start: line(2, "ucmPort.send(" + payload(*d) + ");"); break;
        case EventKind::Resp: line(2, "log(" + payload(*d) + ");"); break;
        case EventKind::End_Point:
          line(2, "alt {");
          line(3, "[] ucmPort.receive(" + payload(*d) + ") {");
          line(4, "setverdict(pass);");
          line(3, "}");
          line(2, "}");
          break;
        case EventKind::Timer_Set:
        case EventKind::Timer_Reset:
        case EventKind::Timeout:
        case EventKind::WP_Enter:
        case EventKind::WP_Leave:
          line(2, "// " + std::string(to_string(d->kind)) + " " +
                      comment_text(d->name.value_or(d->hyperedge_id)));
          break;
        case EventKind::Connect_Start:
        case EventKind::Connect_End:
        case EventKind::Trigger_End: break;
      }
    } else if (auto* c = n.get<Condition>()) {
      std::string text = "// condition " + comment_text(c->label);
      if (c->expression) text += " [" + comment_text(*c->expression) + "]";
      line(2, text);
    } else if (auto* m = n.get<Message>()) {
      line(2, "// message " + comment_text(m->name) + ": " + comment_text(instance_name(doc_, m->source_id)) +
                  " -> " + comment_text(instance_name(doc_, m->destination_id)));
    }
  }

  const ScenarioDocument& doc_;
  std::string out_;
};

}  // namespace detail

/// TTCN-3 skeleton: one module with a single test component type and one
/// testcase per scenario. Scenarios must already be free of Par blocks.
inline std::string emit_ttcn3(const ScenarioDocument& doc) {
  validate_structure(doc);
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) {
      if (n.is<Par>())
        throw Error(ErrorKind::precondition, detail::kTtcnStage,
                    "scenario '" + s.name + "' contains a par block; interleave first (mode single or all)", s.name);
    });
  });
  return detail::TtcnEmitter(doc).emit();
}

}  // namespace ucmx
