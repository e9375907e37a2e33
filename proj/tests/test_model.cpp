// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ucmx;
using th::ev;
using th::par;
using th::seq;

namespace {

std::set<IdPair> pairs(std::initializer_list<IdPair> l) { return std::set<IdPair>(l); }

}  // namespace

TEST(CausalPairs, SequenceOrdersItsChildren) {
  EXPECT_EQ(causal_pairs(seq({ev("x"), ev("y")})), pairs({{"x", "y"}}));
}

TEST(CausalPairs, ParallelSiblingsAreUnordered) {
  EXPECT_TRUE(causal_pairs(par({seq({ev("x")}), seq({ev("y")})})).empty());
}

TEST(CausalPairs, ForkJoinShapeMatchesEnumeration) {
  Node t = seq({ev("a"), par({seq({ev("b")}), seq({ev("c")})}), ev("d")});
  auto expected = pairs({{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}, {"a", "d"}});
  EXPECT_EQ(causal_pairs(t), expected);
  EXPECT_EQ(oracle::causal_pairs_by_enumeration(t), expected);
}

TEST(CausalPairs, RejectsBrokenAlternation) {
  Node bad = seq({seq({ev("a")})});
  try {
    causal_pairs(bad);
    FAIL() << "expected a structural error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::structure);
  }
  EXPECT_THROW(causal_pairs(par({par({seq({ev("a")})})})), Error);
}

TEST(CausalPairs, AgreesWithBothOraclesOnRandomTrees) {
  gen::TreeGenerator g(7, gen::TreeLimits{8, 3, 2, 3, true});
  for (int i = 0; i < 200; ++i) {
    Node t = g.body();
    auto lib = causal_pairs(t);
    EXPECT_EQ(lib, oracle::causal_pairs_by_lca(t));
    EXPECT_EQ(lib, oracle::causal_pairs_by_enumeration(t));
  }
}

TEST(Linearizations, SingleSequence) {
  auto l = linearizations(seq({ev("x"), ev("y")}), 10);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l[0], (std::vector<std::string>{"x", "y"}));
}

TEST(Linearizations, TwoPlusOneGivesThree) {
  Node t = par({seq({ev("a"), ev("b")}), seq({ev("c")})});
  auto l = linearizations(t, 100);
  EXPECT_EQ(l.size(), 3u);
  EXPECT_EQ(oracle::multinomial({2, 1}), 3u);
  EXPECT_EQ(oracle::linearizations(t).size(), 3u);
  EXPECT_EQ(l[0], (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(l[1], (std::vector<std::string>{"a", "c", "b"}));
  EXPECT_EQ(l[2], (std::vector<std::string>{"c", "a", "b"}));
}

TEST(Linearizations, TwoPlusTwoGivesSix) {
  Node t = par({seq({ev("a"), ev("b")}), seq({ev("c"), ev("d")})});
  EXPECT_EQ(linearizations(t, 100).size(), 6u);
  EXPECT_EQ(oracle::linearizations(t).size(), 6u);
  EXPECT_EQ(count_linearizations(t), 6u);
}

TEST(Linearizations, OverflowNamesTheCount) {
  Node t = par({seq({ev("a"), ev("b")}), seq({ev("c"), ev("d")})});
  try {
    linearizations(t, 5);
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::overflow);
    EXPECT_NE(std::string(e.what()).find('6'), std::string::npos);
  }
}

TEST(Linearizations, CapBelowOneIsRejected) {
  EXPECT_THROW(linearizations(seq({ev("x")}), 0), Error);
}

TEST(Linearizations, EachIsAPermutationRespectingTheOrder) {
  gen::TreeGenerator g(11, gen::TreeLimits{7, 3, 2, 3, true});
  for (int i = 0; i < 100; ++i) {
    Node t = g.body();
    auto order = causal_pairs(t);
    auto all = linearizations(t, 100000);
    EXPECT_EQ(all.size(), oracle::linearizations(t).size());
    oracle::Paths p = oracle::paths(t);
    for (const auto& l : all) {
      auto sorted = l;
      std::sort(sorted.begin(), sorted.end());
      auto ids = p.ids;
      std::sort(ids.begin(), ids.end());
      ASSERT_EQ(sorted, ids);
      for (const auto& [a, b] : order) {
        auto ia = std::find(l.begin(), l.end(), a);
        auto ib = std::find(l.begin(), l.end(), b);
        EXPECT_LT(ia, ib);
      }
    }
  }
}

TEST(Linearizations, FlatParCountIsMultinomial) {
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Node t = gen::random_par_block(rng);
    std::vector<unsigned> sizes;
    for (const auto& b : t.as<Seq>().children.front().as<Par>().children)
      sizes.push_back(static_cast<unsigned>(b.as<Seq>().children.size()));
    EXPECT_EQ(count_linearizations(t), oracle::multinomial(sizes));
    EXPECT_EQ(oracle::linearizations(t).size(), oracle::multinomial(sizes));
  }
}

TEST(Model, OwnerOfUnallocatedEventIsEnvironment) {
  Do d;
  d.hyperedge_id = "x";
  EXPECT_EQ(owner_of(d), std::string(kEnvId));
  EXPECT_EQ(instance_name(ScenarioDocument{}, kEnvId), "Env");
}

TEST(Model, SanitizeReplacesOutsideWordCharacters) {
  EXPECT_EQ(sanitize("snd-req"), "snd_req");
  EXPECT_EQ(sanitize("User:orig"), "User_orig");
  EXPECT_EQ(sanitize("caf\xc3\xa9"), "caf_");
}

TEST(Model, MessageRelevance) {
  EXPECT_TRUE(is_message_relevant(EventKind::Resp));
  EXPECT_TRUE(is_message_relevant(EventKind::WP_Leave));
  EXPECT_FALSE(is_message_relevant(EventKind::Connect_Start));
  EXPECT_FALSE(is_message_relevant(EventKind::Connect_End));
  EXPECT_FALSE(is_message_relevant(EventKind::Trigger_End));
}
