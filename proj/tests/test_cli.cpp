// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "helpers.hpp"
#include "ucmx/cli.hpp"

namespace fs = std::filesystem;
using namespace ucmx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run ucmexport(std::vector<std::string> args) {
  args.insert(args.begin(), "ucmexport");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test.
fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = fs::temp_directory_path() / "ucmx_cli" / (std::string(info->test_suite_name()) + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) { return th::read_text(p.string()); }

}  // namespace

TEST(Cli, TransformWritesArtifactAndIntermediate) {
  auto dir = scratch();
  auto r = ucmexport({"transform", "--input", th::fixture_path("fig5a.scn.xml"), "--format", "msc", "--out",
                      dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(dir / "fig5a.msc"));
  ASSERT_TRUE(fs::exists(dir / "fig5a.enriched.xml"));
  EXPECT_NO_THROW(msc::read(slurp(dir / "fig5a.msc")));
  EXPECT_NO_THROW(parse_scenarios(slurp(dir / "fig5a.enriched.xml"), FormatVariant::Enriched));
}

TEST(Cli, EnrichedInputIsNotResynthesized) {
  auto dir = scratch();
  ASSERT_EQ(ucmexport({"transform", "--input", th::fixture_path("fig5d.scn.xml"), "--format", "msc", "--out",
                       dir.string()})
                .code,
            0);
  auto again = dir / "again";
  ASSERT_EQ(ucmexport({"transform", "--input", (dir / "fig5d.enriched.xml").string(), "--format", "msc", "--out",
                       again.string()})
                .code,
            0);
  EXPECT_EQ(slurp(again / "fig5d.msc"), slurp(dir / "fig5d.msc"));
}

TEST(Cli, NoIntermediate) {
  auto dir = scratch();
  auto r = ucmexport({"transform", "--input", th::fixture_path("fig5b.scn.xml"), "--format", "xmi", "--out",
                      dir.string(), "--no-intermediate"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "fig5b.xmi"));
  EXPECT_FALSE(fs::exists(dir / "fig5b.enriched.xml"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(ucmexport({"transform", "--input", "x.scn.xml", "--out", "o"}).code, 1);
  EXPECT_EQ(ucmexport({"transform", "--input", "x", "--format", "pdf", "--out", "o"}).code, 1);
  EXPECT_EQ(ucmexport({"transform", "--input", "x", "--format", "msc", "--out", "o", "--cap", "0"}).code, 1);
  EXPECT_EQ(ucmexport({}).code, 1);
  auto help = ucmexport({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("transform"), std::string::npos);
}

TEST(Cli, TtcnOnParallelDocumentNeedsInterleaving) {
  auto dir = scratch();
  auto r = ucmexport({"transform", "--input", th::fixture_path("fig5d.scn.xml"), "--format", "ttcn3", "--out",
                      dir.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("emit-ttcn"), std::string::npos) << r.err;
  auto ok = ucmexport({"transform", "--input", th::fixture_path("fig5d.scn.xml"), "--format", "ttcn3",
                       "--interleave", "single", "--out", dir.string()});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(ttcn::check(slurp(dir / "fig5d.ttcn")).ok());
}

TEST(Cli, ValidationErrorExitsTwo) {
  auto dir = scratch();
  auto bad = dir / "bad.scn.xml";
  std::ofstream(bad) << "<scenarios><group name='g'><scenario name='s'><seq><par><seq/></par></seq>"
                        "</scenario></group></scenarios>";
  auto r = ucmexport({"transform", "--input", bad.string(), "--format", "msc", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  auto missing = ucmexport({"transform", "--input", (dir / "none.scn.xml").string(), "--format", "msc", "--out",
                            dir.string()});
  EXPECT_EQ(missing.code, 3);
  auto over = ucmexport({"transform", "--input", th::fixture_path("mixed_kinds.scn.xml"), "--format", "msc",
                         "--interleave", "all", "--out", dir.string()});
  EXPECT_EQ(over.code, 3);
  EXPECT_NE(over.err.find("exceed cap 64"), std::string::npos) << over.err;
}

TEST(Cli, RulesFile) {
  auto dir = scratch();
  auto rules = dir / "r.rules";
  std::ofstream(rules) << "rename message did_doX_do_doY RequestDoY\n";
  auto r = ucmexport({"transform", "--input", th::fixture_path("two_component.scn.xml"), "--format", "msc",
                      "--rules", rules.string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "two_component.msc").find("out RequestDoY,"), std::string::npos);
  std::ofstream(rules) << "frobnicate x\n";
  EXPECT_EQ(ucmexport({"transform", "--input", th::fixture_path("two_component.scn.xml"), "--format", "msc",
                       "--rules", rules.string(), "--out", dir.string()})
                .code,
            2);
}

TEST(Cli, TraverseThenTransform) {
  auto dir = scratch();
  auto plain = dir / "calls.scn.xml";
  auto r = ucmexport({"traverse", "--ucm", th::fixture_path("call_request.ucmx"), "--out", plain.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = parse_scenarios(slurp(plain), FormatVariant::Plain);
  std::size_t n = 0;
  doc.for_each_scenario([&](const Scenario&) { ++n; });
  EXPECT_EQ(n, 3u);
  EXPECT_EQ(ucmexport({"transform", "--input", plain.string(), "--format", "xmi", "--out", dir.string()}).code, 0);
  auto one = ucmexport({"traverse", "--ucm", th::fixture_path("call_request.ucmx"), "--scenario", "CallBusy",
                        "--out", (dir / "busy.scn.xml").string()});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(ucmexport({"traverse", "--ucm", th::fixture_path("loop.ucmx"), "--max-visits", "1", "--out",
                       (dir / "l.scn.xml").string()})
                .code,
            3);
}

TEST(Cli, CheckReportsOkAndViolations) {
  auto dir = scratch();
  ASSERT_EQ(ucmexport({"transform", "--input", th::fixture_path("fig5c.scn.xml"), "--format", "msc", "--out",
                       dir.string()})
                .code,
            0);
  auto good = ucmexport({"check", "--input", (dir / "fig5c.enriched.xml").string()});
  EXPECT_EQ(good.code, 0) << good.out << good.err;
  EXPECT_NE(good.out.find("  ok"), std::string::npos);
  // Dropping the post-par message leaves R1 -> R3 uncarried.
  auto text = slurp(dir / "fig5c.enriched.xml");
  auto at = text.find("<message id=\"S1_m2\"");
  ASSERT_NE(at, std::string::npos);
  text.erase(at, text.find('\n', at) - at);
  auto broken = dir / "broken.enriched.xml";
  std::ofstream(broken) << text;
  auto bad = ucmexport({"check", "--input", broken.string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("  violation: scenario 'c': no message carries causality from 'r1' to 'r3'"),
            std::string::npos)
      << bad.out;
}

TEST(Cli, OutputIsDeterministic) {
  auto a = scratch() / "a";
  auto b = a.parent_path() / "b";
  for (const auto* input : {"mixed_kinds.scn.xml", "fig8_call_request.scn.xml"})
    for (const auto* format : {"msc", "xmi", "ttcn3"})
      for (const auto& dir : {a, b})
        ASSERT_EQ(ucmexport({"transform", "--input", th::fixture_path(input), "--format", format, "--interleave",
                             input[0] == 'm' ? "single" : "all", "--out", dir.string()})
                      .code,
                  0);
  for (const auto* stem : {"mixed_kinds", "fig8_call_request"})
    for (const auto* ext : {".msc", ".xmi", ".ttcn", ".enriched.xml"}) {
      const std::string file = std::string(stem) + ext;
      EXPECT_EQ(slurp(a / file), slurp(b / file)) << file;
    }
}

TEST(Cli, InstalledBinaryRuns) {
  auto dir = scratch();
  std::string cmd = std::string("\"") + UCMX_TOOL + "\" transform --input \"" + th::fixture_path("fig5a.scn.xml") +
                    "\" --format msc --out \"" + dir.string() + "\" > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "fig5a.msc"));
  std::string bad = std::string("\"") + UCMX_TOOL + "\" transform > /dev/null 2>&1";
  int status = std::system(bad.c_str());
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 1);
}
