// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ucmx;
using th::ev;
using th::par;
using th::seq;

namespace {

ScenarioDocument enriched(const std::string& fixture, const MappingConfig& m = {}) {
  return synthesize(parse_scenarios(th::fixture(fixture), FormatVariant::Plain), m);
}

void find_all(const xml::Element& e, const std::string& name, std::vector<const xml::Element*>& out) {
  if (e.name == name) out.push_back(&e);
  for (const auto& c : e.children) find_all(c, name, out);
}

std::vector<const xml::Element*> find_all(const xml::Element& e, const std::string& name) {
  std::vector<const xml::Element*> out;
  find_all(e, name, out);
  return out;
}

std::vector<std::string> segments(const std::string& label) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (!label.empty() && at <= label.size()) {
    auto dot = label.find('.', at);
    out.push_back(label.substr(at, dot == std::string::npos ? std::string::npos : dot - at));
    if (dot == std::string::npos) break;
    at = dot + 1;
  }
  return out;
}

// Two labels denote concurrent positions iff they first differ at an `s`
// segment (same enclosing `p`).
bool labels_concurrent(const std::string& a, const std::string& b) {
  auto x = segments(a), y = segments(b);
  std::size_t k = 0;
  while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
  return k < x.size() && k < y.size() && x[k][0] == 's';
}

}  // namespace

TEST(ParLabels, CallRequestBranches) {
  auto d = enriched("fig8_call_request.scn.xml");
  auto labels = par_labels(d.groups[0].scenarios[0].body);
  std::set<std::string> distinct(labels.begin(), labels.end());
  EXPECT_EQ(distinct, (std::set<std::string>{"", "p1.s1", "p1.s2"}));
}

TEST(ParLabels, NestedPath) {
  // Par 1 has two branches; branch 2 holds par 2 with three branches.
  Node t = seq({par({seq({ev("a")}),
                     seq({par({seq({ev("b")}), seq({ev("c")}), seq({ev("d")})})})})});
  auto labels = par_labels(t);
  EXPECT_EQ(labels, (std::vector<std::string>{"p1.s1", "p1.s2.p2.s1", "p1.s2.p2.s2", "p1.s2.p2.s3"}));
}

TEST(ParLabels, OutsideAnyParIsEmpty) {
  auto labels = par_labels(seq({ev("a"), ev("b")}));
  EXPECT_EQ(labels, (std::vector<std::string>{"", ""}));
}

TEST(ParLabels, ConcurrencySoundnessOnRandomTrees) {
  gen::TreeGenerator g(41, gen::TreeLimits{10, 4, 2, 3, true});
  for (int i = 0; i < 200; ++i) {
    Node t = g.body();
    auto labels = par_labels(t);
    oracle::Paths p = oracle::paths(t);
    for (std::size_t a = 0; a < labels.size(); ++a)
      for (std::size_t b = a + 1; b < labels.size(); ++b) {
        bool concurrent = !oracle::lca_before(p, a, b) && !oracle::lca_before(p, b, a);
        EXPECT_EQ(concurrent, labels_concurrent(labels[a], labels[b])) << labels[a] << " vs " << labels[b];
      }
  }
}

TEST(EmitXmi, CallRequestMessages) {
  auto d = enriched("fig8_call_request.scn.xml");
  auto root = xml::parse(emit_xmi(d));
  std::vector<std::string> names;
  for (auto* m : find_all(root, "UML:Message")) names.push_back(*m->attr("name"));
  auto pos = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) - names.begin(); };
  ASSERT_LT(pos("ring(p1.s1)"), static_cast<long>(names.size()));
  ASSERT_LT(pos("ringing(p1.s2)"), static_cast<long>(names.size()));
  ASSERT_LT(pos("did_snd_req_do_ringTreatment"), static_cast<long>(names.size()));
  EXPECT_LT(pos("did_snd_req_do_ringTreatment"), pos("ring(p1.s1)"));
  EXPECT_LT(pos("did_snd_req_do_ringTreatment"), pos("ringing(p1.s2)"));
  EXPECT_EQ(find_all(root, "UML:ClassifierRole").size(), 4u);
}

TEST(EmitXmi, TwoScenariosTwoInteractions) {
  auto d = enriched("naming_overlap.scn.xml");
  auto root = xml::parse(emit_xmi(d));
  EXPECT_EQ(find_all(root, "UML:Interaction").size(), 2u);
  EXPECT_EQ(find_all(root, "UML:Collaboration").size(), 2u);
  EXPECT_EQ(*root.attr("xmi.version"), "1.2");
}

TEST(EmitXmi, EmptyScenarioHasRolesOnly) {
  ScenarioDocument d = th::doc_of({seq({})});
  d.instances.push_back({"A", "A", {}});
  d.instances.push_back({"B", "B", {}});
  auto root = xml::parse(emit_xmi(d));
  EXPECT_EQ(find_all(root, "UML:ClassifierRole").size(), 2u);
  EXPECT_EQ(find_all(root, "UML:Interaction").size(), 1u);
  EXPECT_TRUE(find_all(root, "UML:Message").empty());
}

TEST(EmitXmi, ParameterListKeepsLabelFirst) {
  EXPECT_EQ(detail::labelled_name("Request(doY)", "p1.s1"), "Request(p1.s1, doY)");
  EXPECT_EQ(detail::labelled_name("Request()", "p1.s1"), "Request(p1.s1)");
  EXPECT_EQ(detail::labelled_name("Request", ""), "Request");
}

TEST(EmitXmi, EnvironmentLifelineInEnvMode) {
  MappingConfig m;
  m.start_point = EndpointMode::env_message;
  auto d = enriched("fig8_call_request.scn.xml", m);
  auto root = xml::parse(emit_xmi(d, m));
  auto roles = find_all(root, "UML:ClassifierRole");
  ASSERT_EQ(roles.size(), 5u);
  EXPECT_EQ(*roles.back()->attr("name"), "Env");
  auto msgs = find_all(root, "UML:Message");
  EXPECT_EQ(*msgs.front()->attr("sender"), *roles.back()->attr("xmi.id"));
}

TEST(EmitXmi, MessageOrderIsALinearExtension) {
  gen::TreeGenerator g(51);
  for (int i = 0; i < 100; ++i) {
    auto d = synthesize(g.document());
    auto plan = detail::plan_interactions(d, {});
    const Node& body = d.groups[0].scenarios[0].body;
    // Emitted elements follow leaf document order; every leaf-level order
    // of the tree is respected by document order.
    oracle::Paths p = oracle::paths(body);
    for (std::size_t a = 0; a < p.ids.size(); ++a)
      for (std::size_t b = 0; b < p.ids.size(); ++b)
        if (oracle::lca_before(p, a, b)) EXPECT_LT(a, b);
    std::size_t expected = 0;
    for (auto* leaf : p.leaves) {
      if (leaf->is<Message>()) ++expected;
      if (auto* x = leaf->get<Do>(); x && is_message_relevant(x->kind)) ++expected;
    }
    EXPECT_EQ(plan.at(0).messages.size(), expected);
  }
}

TEST(Layout, FourInstancePositions) {
  auto d = enriched("fig8_call_request.scn.xml");
  auto out = add_layout_hints(emit_xmi(d), d);
  auto root = xml::parse(out);
  std::vector<std::string> xs;
  for (auto* l : find_all(root, "lifeline")) xs.push_back(*l->attr("x"));
  EXPECT_EQ(xs, (std::vector<std::string>{"60", "200", "340", "480"}));
  auto events = find_all(root, "event");
  for (std::size_t r = 0; r < events.size(); ++r) EXPECT_EQ(*events[r]->attr("rank"), std::to_string(r + 1));
}

TEST(Layout, EmptyScenarioHasLifelinesOnly) {
  ScenarioDocument d = th::doc_of({seq({})});
  d.instances.push_back({"A", "A", {}});
  auto root = xml::parse(add_layout_hints(emit_xmi(d), d));
  EXPECT_EQ(find_all(root, "lifeline").size(), 1u);
  EXPECT_TRUE(find_all(root, "event").empty());
}

TEST(Layout, SecondPassIsRejected) {
  auto d = enriched("fig5a.scn.xml");
  auto once = add_layout_hints(emit_xmi(d), d);
  try {
    add_layout_hints(once, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(Layout, UnknownElementIsAConsistencyError) {
  auto a = enriched("fig5a.scn.xml");
  auto b = enriched("fig8_call_request.scn.xml");
  try {
    add_layout_hints(emit_xmi(a), b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::consistency);
    EXPECT_FALSE(e.element().empty());
  }
}

TEST(Layout, BaseBytesArePreserved) {
  for (const auto& name : th::fixtures_with_suffix(".scn.xml")) {
    SCOPED_TRACE(name);
    auto d = enriched(name);
    auto base = emit_xmi(d);
    auto with = add_layout_hints(base, d);
    EXPECT_EQ(strip_layout_hints(with), base);
    // The inserted block is one contiguous run of bytes.
    auto at = with.find("  <XMI.extensions");
    ASSERT_NE(at, std::string::npos);
    EXPECT_EQ(with.substr(0, at), base.substr(0, at));
    EXPECT_EQ(with.substr(with.size() - (base.size() - at)), base.substr(at));
  }
}

TEST(EmitXmi, Deterministic) {
  auto d = enriched("mixed_kinds.scn.xml");
  EXPECT_EQ(emit_xmi(d), emit_xmi(d));
}
