// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ucmx/invariants.hpp"
#include "ucmx/pipeline.hpp"
#include "ucmx/traversal.hpp"

namespace ucmx::cli {

enum ExitCode : int { ok = 0, usage = 1, validation = 2, pipeline = 3 };

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::syntax:
    case ErrorKind::validation:
    case ErrorKind::structure:
    case ErrorKind::config: return validation;
    default: return pipeline;
  }
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::precondition, "cli", "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::precondition, "cli", "cannot write '" + p.string() + "'");
}

/// File name minus `.scn.xml`, `.enriched.xml` or `.xml`.
inline std::string stem_of(const std::filesystem::path& p) {
  std::string name = p.filename().string();
  for (std::string_view suffix : {".scn.xml", ".enriched.xml", ".xml"})
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      return name.substr(0, name.size() - suffix.size());
  return name;
}

}  // namespace detail

/// Entry point of the `ucmexport` tool. Diagnostics go to `err`, reports to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transforms scenario documents extracted from Use Case Maps into MSC, XMI and TTCN-3."};
  app.name("ucmexport");
  app.require_subcommand(1);

  std::string input, format, rules_file, interleave = "keep", layout = "generic";
  std::string map_start = "action", map_end = "action", map_resp = "action", out_dir;
  std::size_t cap = 64;
  bool no_intermediate = false;
  auto* transform_cmd = app.add_subcommand("transform", "Synthesize messages and emit one artifact");
  transform_cmd->add_option("--input", input, "Scenario document (.scn.xml or .enriched.xml)")->required();
  transform_cmd->add_option("--format", format, "Output format")
      ->required()
      ->check(CLI::IsMember({"msc", "xmi", "ttcn3"}));
  transform_cmd->add_option("--rules", rules_file, "Customization rule file");
  transform_cmd->add_option("--interleave", interleave, "Interleaving mode")
      ->check(CLI::IsMember({"keep", "single", "all"}));
  transform_cmd->add_option("--cap", cap, "Maximum interleavings per scenario in mode 'all'")
      ->check(CLI::PositiveNumber);
  transform_cmd->add_option("--layout", layout, "Layout hints for xmi")->check(CLI::IsMember({"generic", "none"}));
  transform_cmd->add_option("--map-start", map_start, "Start point mapping")->check(CLI::IsMember({"env", "action"}));
  transform_cmd->add_option("--map-end", map_end, "End point mapping")->check(CLI::IsMember({"env", "action"}));
  transform_cmd->add_option("--map-resp", map_resp, "Responsibility mapping")->check(CLI::IsMember({"action", "self"}));
  transform_cmd->add_option("--out", out_dir, "Output directory")->required();
  transform_cmd->add_flag("--no-intermediate", no_intermediate, "Do not write the .enriched.xml file");

  std::string ucm_file, scenario, traverse_out;
  std::size_t max_visits = 100;
  auto* traverse_cmd = app.add_subcommand("traverse", "Extract plain scenarios from a .ucmx map");
  traverse_cmd->add_option("--ucm", ucm_file, "Mini UCM file")->required();
  traverse_cmd->add_option("--scenario", scenario, "Only this scenario definition");
  traverse_cmd->add_option("--max-visits", max_visits, "Per-node visit cap")->check(CLI::PositiveNumber);
  traverse_cmd->add_option("--out", traverse_out, "Output .scn.xml file")->required();

  std::string check_input;
  auto* check_cmd = app.add_subcommand("check", "Validate a document and report invariant diagnostics");
  check_cmd->add_option("--input", check_input, "Scenario document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage;
  }

  try {
    if (*transform_cmd) {
      TransformOptions opt;
      opt.format = format == "msc" ? OutputFormat::msc : format == "xmi" ? OutputFormat::xmi : OutputFormat::ttcn3;
      if (!rules_file.empty()) opt.rules = parse_rules(detail::read_file(rules_file));
      opt.interleave.mode = interleave == "keep"     ? InterleaveKind::keep_par
                            : interleave == "single" ? InterleaveKind::single
                                                     : InterleaveKind::all;
      opt.interleave.cap = cap;
      opt.layout = layout == "generic";
      opt.mapping.start_point = map_start == "env" ? EndpointMode::env_message : EndpointMode::action;
      opt.mapping.end_point = map_end == "env" ? EndpointMode::env_message : EndpointMode::action;
      opt.mapping.responsibility = map_resp == "self" ? RespMode::self_message : RespMode::action;

      auto result = transform(detail::read_file(input), opt);
      const std::filesystem::path dir(out_dir);
      const std::string stem = detail::stem_of(input);
      const std::string ext = format == "ttcn3" ? ".ttcn" : "." + format;
      detail::write_file(dir / (stem + ext), result.artifact);
      if (!no_intermediate) detail::write_file(dir / (stem + ".enriched.xml"), result.enriched_xml);
      return ok;
    }
    if (*traverse_cmd) {
      auto model = ucm::parse_ucm(detail::read_file(ucm_file));
      std::optional<std::string> only;
      if (!scenario.empty()) only = scenario;
      auto doc = traverse_model(model, std::filesystem::path(ucm_file).filename().string(), only,
                                TraversalLimits{max_visits});
      detail::write_file(traverse_out, write_document(doc, FormatVariant::Plain));
      return ok;
    }
    auto doc = parse_scenarios(detail::read_file(check_input), FormatVariant::Enriched);
    auto problems = document_diagnostics(doc);
    std::size_t scenarios = 0, messages = 0;
    doc.for_each_scenario([&](const Scenario& s) {
      ++scenarios;
      visit_nodes(s.body, [&](const Node& n) { messages += n.is<Message>() ? 1 : 0; });
    });
    out << check_input << ": " << doc.groups.size() << " group(s), " << scenarios << " scenario(s), "
        << doc.instances.size() << " instance(s), " << messages << " message(s)\n";
    for (const auto& p : problems) out << "  violation: " << p << "\n";
    if (!problems.empty()) return validation;
    out << "  ok\n";
    return ok;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return pipeline;
  }
}

}  // namespace ucmx::cli
