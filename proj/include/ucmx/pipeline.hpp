// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "ucmx/customization.hpp"
#include "ucmx/emit_msc.hpp"
#include "ucmx/emit_sd.hpp"
#include "ucmx/emit_ttcn.hpp"
#include "ucmx/labels.hpp"
#include "ucmx/synthesis.hpp"
#include "ucmx/xml_io.hpp"

namespace ucmx {

enum class OutputFormat { msc, xmi, ttcn3 };

struct TransformOptions {
  OutputFormat format = OutputFormat::msc;
  CustomizationRuleSet rules;
  InterleaveMode interleave;
  bool layout = true;  // xmi only
  MappingConfig mapping;
};

struct TransformResult {
  ScenarioDocument document;  // what the emitter consumed
  std::string enriched_xml;
  std::string artifact;
};

inline bool has_messages(const ScenarioDocument& doc) {
  bool found = false;
  doc.for_each_scenario([&](const Scenario& s) {
    visit_nodes(s.body, [&](const Node& n) { found = found || n.is<Message>(); });
  });
  return found;
}

/// parse -> synthesis (skipped for documents that already carry messages) ->
/// customization -> interleaving -> emitter (-> layout pass for xmi).
inline TransformResult transform(std::string_view input_xml, const TransformOptions& opt) {
  ScenarioDocument doc = parse_scenarios(input_xml, FormatVariant::Enriched);
  if (!has_messages(doc)) doc = synthesize(std::move(doc), opt.mapping);
  doc = apply_rules(std::move(doc), opt.rules);
  doc = synthesize_interleavings(std::move(doc), opt.interleave);
  // Interleaved scenarios keep the labels of the blocks they came from.
  if (opt.interleave.mode == InterleaveKind::keep_par) doc = assign_par_labels(std::move(doc));

  TransformResult r;
  r.enriched_xml = write_document(doc, FormatVariant::Enriched);
  switch (opt.format) {
    case OutputFormat::msc: r.artifact = emit_msc(doc, MscOptions{opt.mapping, false}); break;
    case OutputFormat::xmi:
      r.artifact = emit_xmi(doc, opt.mapping);
      if (opt.layout) r.artifact = add_layout_hints(r.artifact, doc, opt.mapping);
      break;
    case OutputFormat::ttcn3: r.artifact = emit_ttcn3(doc); break;
  }
  r.document = std::move(doc);
  return r;
}

}  // namespace ucmx
