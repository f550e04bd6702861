// Copyright 2026 The cnlm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/cnbuild/mesh.h"
#include "cnlm/core/error.h"
#include "cnlm/nbest/postprocess.h"
#include "oracles.h"

namespace cnlm {
namespace {

NBestList MakeList(std::vector<std::pair<Sentence, double>> hyps) {
  NBestList l;
  l.source_id = "s";
  for (auto &[tokens, p] : hyps) l.hypotheses.push_back({tokens, std::log(p)});
  SortHypotheses(&l.hypotheses);
  return l;
}

TEST(MeshTest, InsertionCreatesBinWithDelete) {
  Mesh mesh;
  mesh.Align({"no", "they", "are", "outside"}, 0.6);
  mesh.Align({"no", "they", "are", "at", "outside"}, 0.4);
  const ConfusionNetwork cn = mesh.ToConfusionNetwork("s");
  ASSERT_EQ(cn.bins.size(), 5u);
  EXPECT_NEAR(cn.bins[3].ScoreOf("at"), 0.4, 1e-15);
  EXPECT_NEAR(cn.bins[3].ScoreOf("*DELETE*"), 0.6, 1e-15);
  EXPECT_EQ(cn.bins[3].arcs.size(), 2u);
  EXPECT_NEAR(cn.bins[4].ScoreOf("outside"), 1.0, 1e-15);
}

TEST(MeshTest, IdenticalHypothesisAddsWeight) {
  Mesh mesh;
  mesh.Align({"a", "b"}, 0.3);
  mesh.Align({"a", "b"}, 0.2);
  const ConfusionNetwork cn = mesh.ToConfusionNetwork("s");
  ASSERT_EQ(cn.bins.size(), 2u);
  for (const Bin &b : cn.bins) {
    ASSERT_EQ(b.arcs.size(), 1u);
    EXPECT_NEAR(b.arcs[0].score, 0.5, 1e-15);
  }
}

TEST(MeshTest, TieBreakPrefersSubstitutionThenDeletion) {
  Mesh mesh;
  mesh.Align({"a", "b"}, 0.5);
  mesh.Align({"c"}, 0.5);
  // Substituting c for a and deleting b costs 2, as does deleting a and
  // substituting for b. The backtrace from the end takes the diagonal
  // (b vs c) first.
  const std::vector<Sentence> paths = mesh.AlignedPaths();
  EXPECT_EQ(paths[1], (Sentence{"*DELETE*", "c"}));
}

TEST(MeshTest, EmptyHypothesisIgnored) {
  Mesh mesh;
  mesh.Align({"a"}, 1.0);
  mesh.Align({}, 0.5);
  EXPECT_EQ(mesh.num_columns(), 1u);
  EXPECT_DOUBLE_EQ(mesh.total_weight(), 1.0);
}

TEST(BuildCnTest, FigureShape) {
  const NBestList list = MakeList({{{"no", "they", "are", "on", "the", "outside"}, 0.5},
                                   {{"no", "they", "are", "at", "the", "outside"}, 0.3},
                                   {{"no", "they", "are", "outside"}, 0.2}});
  const ConfusionNetwork cn = BuildConfusionNetwork(list, {}, nullptr);
  ASSERT_EQ(cn.bins.size(), 6u);
  EXPECT_EQ(cn.bins[3].arcs[0].token, "on");
  EXPECT_NEAR(cn.bins[3].ScoreOf("on"), 0.5, 1e-12);
  EXPECT_NEAR(cn.bins[3].ScoreOf("at"), 0.3, 1e-12);
  EXPECT_NEAR(cn.bins[3].ScoreOf("*DELETE*"), 0.2, 1e-12);
  EXPECT_NEAR(cn.bins[4].ScoreOf("the"), 0.8, 1e-12);
  EXPECT_EQ(cn.bins[5].arcs[0].token, "outside");
  EXPECT_TRUE(CheckConfusionNetwork(cn).empty());
  const std::string text = SerializeConfusionNetwork(cn);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  EXPECT_NE(text.find("align 3 on 0.500000 at 0.300000 *DELETE* 0.200000\n"),
            std::string::npos);
}

TEST(BuildCnTest, SingleHypothesisIsChain) {
  const NBestList list = MakeList({{{"a", "b", "c"}, 1.0}});
  const ConfusionNetwork cn = BuildConfusionNetwork(list, {}, nullptr);
  ASSERT_EQ(cn.bins.size(), 3u);
  for (const Bin &b : cn.bins) {
    ASSERT_EQ(b.arcs.size(), 1u);
    EXPECT_EQ(b.arcs[0].score, 1.0);
  }
}

TEST(BuildCnTest, EmptyListThrows) {
  EXPECT_THROW(BuildConfusionNetwork(NBestList{}, {}, nullptr), Error);
}

TEST(HandleDeletesTest, Examples) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"*DELETE*", 1.0}}},
             Bin{{{"a", 0.5}, {"*DELETE*", 0.3}, {"*DELETE*", 0.2}}},
             Bin{{{"b", 1.0}}}};
  const ConfusionNetwork out = HandleDeletes(cn);
  ASSERT_EQ(out.bins.size(), 2u);
  EXPECT_EQ(out.bins[0].arcs, (std::vector<Arc>{{"a", 0.5}, {"*DELETE*", 0.5}}));
  EXPECT_EQ(out.bins[1].arcs, cn.bins[2].arcs);
}

TEST(CollapseTest, CaseAndDigits) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"I'll", 0.4}, {"i'll", 0.3}, {"I", 0.3}}},
             Bin{{{"8:30", 0.2}, {"9:15", 0.1}, {"at", 0.7}}}};
  const ConfusionNetwork out = CollapseEquivalentArcs(cn, nullptr);
  EXPECT_EQ(out.bins[0].arcs.size(), 2u);
  EXPECT_NEAR(out.bins[0].ScoreOf("i'll"), 0.7, 1e-15);
  EXPECT_NEAR(out.bins[0].ScoreOf("i"), 0.3, 1e-15);
  EXPECT_NEAR(out.bins[1].ScoreOf("<d>"), 0.3, 1e-15);
  const Vocabulary vocab(std::vector<Token>{"i"});
  const ConfusionNetwork mapped = CollapseEquivalentArcs(cn, &vocab);
  EXPECT_NEAR(mapped.bins[0].ScoreOf("<unk>"), 0.7, 1e-15);
  EXPECT_NEAR(mapped.bins[1].ScoreOf("<unk>"), 0.7, 1e-15);
  ConfusionNetwork plain;
  plain.bins = {Bin{{{"a", 0.6}, {"b", 0.4}}}};
  EXPECT_EQ(CollapseEquivalentArcs(plain, nullptr).bins[0].arcs, plain.bins[0].arcs);
}

TEST(CapArcsTest, KeepsBest) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"a", .1}, {"b", .2}, {"c", .05}, {"d", .25}, {"e", .15},
                  {"f", .1}, {"g", .15}}},
             Bin{{{"x", .5}, {"y", .3}, {"z", .2}}}};
  const ConfusionNetwork out = NormalizeAndSort(CapArcs(cn, 5));
  ASSERT_EQ(out.bins[0].arcs.size(), 5u);
  std::vector<Token> kept;
  for (const Arc &a : out.bins[0].arcs) kept.push_back(a.token);
  // a and f tie at 0.1; a wins lexicographically.
  EXPECT_EQ(kept, (std::vector<Token>{"d", "b", "e", "g", "a"}));
  EXPECT_NEAR(out.bins[0].Total(), 1.0, 1e-12);
  EXPECT_EQ(out.bins[1].arcs.size(), 3u);
}

TEST(CapArcsTest, NeverLeavesOnlyDelete) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"*DELETE*", .7}, {"a", .2}, {"b", .1}}}};
  const ConfusionNetwork out = CapArcs(cn, 1);
  ASSERT_EQ(out.bins[0].arcs.size(), 1u);
  EXPECT_EQ(out.bins[0].arcs[0].token, "a");
}

TEST(NormalizeTest, Examples) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"a", .2}, {"b", .2}}}, Bin{{{"a", .1}, {"b", .3}}}};
  const ConfusionNetwork out = NormalizeAndSort(cn);
  EXPECT_EQ(out.bins[0].arcs, (std::vector<Arc>{{"a", .5}, {"b", .5}}));
  EXPECT_EQ(out.bins[1].arcs[0].token, "b");
  const ConfusionNetwork again = NormalizeAndSort(out);
  for (std::size_t k = 0; k < out.bins.size(); ++k) {
    ASSERT_EQ(again.bins[k].arcs.size(), out.bins[k].arcs.size());
    for (std::size_t i = 0; i < out.bins[k].arcs.size(); ++i) {
      EXPECT_EQ(again.bins[k].arcs[i].token, out.bins[k].arcs[i].token);
      EXPECT_NEAR(again.bins[k].arcs[i].score, out.bins[k].arcs[i].score, 1e-15);
    }
  }
  ConfusionNetwork zero;
  zero.bins = {Bin{{{"a", 0.0}}}};
  EXPECT_THROW(NormalizeAndSort(zero), ValidationError);
}

TEST(SerializeTest, Format) {
  ConfusionNetwork cn = ChainNetwork("x", {"a"});
  EXPECT_EQ(SerializeConfusionNetwork(cn), "name x\nnumaligns 1\nalign 0 a 1.000000\n");
}

TEST(SerializeTest, RoundTrip) {
  const NBestList list = MakeList({{{"a", "b", "c"}, 0.5}, {{"a", "x", "c", "d"}, 0.3},
                                   {{"b", "c"}, 0.2}});
  const ConfusionNetwork cn = BuildConfusionNetwork(list, {}, nullptr);
  const ConfusionNetwork back = ParseConfusionNetwork(SerializeConfusionNetwork(cn));
  ASSERT_EQ(back.bins.size(), cn.bins.size());
  for (std::size_t k = 0; k < cn.bins.size(); ++k) {
    ASSERT_EQ(back.bins[k].arcs.size(), cn.bins[k].arcs.size());
    for (std::size_t i = 0; i < cn.bins[k].arcs.size(); ++i) {
      EXPECT_EQ(back.bins[k].arcs[i].token, cn.bins[k].arcs[i].token);
      EXPECT_NEAR(back.bins[k].arcs[i].score, cn.bins[k].arcs[i].score, 1e-6);
    }
  }
}

TEST(SerializeTest, ParseErrors) {
  const auto line_of = [](const std::string &text) -> std::size_t {
    try {
      ParseConfusionNetworks(text);
    } catch (const ParseError &e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("name x\nnumaligns 1\nalign 0 a 1.0\nbogus\n"), 4u);
  EXPECT_EQ(line_of("name x\nnumaligns 1\nalign 0 a one\n"), 3u);
  EXPECT_EQ(line_of("name x\nnumaligns 2\nalign 1 a 1.0\n"), 3u);
  EXPECT_EQ(line_of("name x\nnumaligns 2\nalign 0 a 1.0\n"), 3u);
}

TEST(ValidatorTest, FlagsViolations) {
  ConfusionNetwork cn;
  cn.bins = {Bin{{{"*DELETE*", 1.0}}}};
  EXPECT_FALSE(CheckConfusionNetwork(cn).empty());
  cn.bins = {Bin{{{"a", 0.4}, {"b", 0.6}}}};
  EXPECT_FALSE(CheckConfusionNetwork(cn).empty());  // unsorted
  cn.bins = {Bin{{{"a", 0.6}, {"b", 0.3}}}};
  EXPECT_FALSE(CheckConfusionNetwork(cn).empty());  // sum
  cn.bins = {Bin{{{"a", 0.5}, {"a", 0.5}}}};
  EXPECT_FALSE(CheckConfusionNetwork(cn).empty());  // duplicate
  cn.bins = {Bin{}};
  EXPECT_FALSE(CheckConfusionNetwork(cn).empty());
  cn.bins = {Bin{{{"a", 0.6}, {"b", 0.4}}}};
  EXPECT_TRUE(CheckConfusionNetwork(cn).empty());
  EXPECT_THROW(ValidateConfusionNetwork(ConfusionNetwork{"x", {Bin{}}}), ValidationError);
}

// Random post-processed lists over a small vocabulary.
NBestList RandomList(std::mt19937_64 &rng, int n, std::size_t max_len) {
  const Sentence words{"a", "b", "c", "d", "E", "8:30"};
  NBestList raw;
  raw.source_id = "r";
  raw.source = Sentence(1 + rng() % max_len, "q");
  for (int h = 0; h < n; ++h) {
    Sentence t(1 + rng() % max_len);
    for (Token &w : t) w = words[rng() % words.size()];
    raw.hypotheses.push_back({t, -static_cast<double>(rng() % 4000) / 1000.0});
  }
  SortHypotheses(&raw.hypotheses);
  return PostprocessNBest(raw);
}

TEST(BuildCnPropertyTest, FinalizedNetworksAreValid) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const NBestList list = RandomList(rng, 1 + static_cast<int>(rng() % 20), 8);
    const ConfusionNetwork cn = BuildConfusionNetwork(list, {}, nullptr);
    const std::vector<std::string> problems = CheckConfusionNetwork(cn);
    EXPECT_TRUE(problems.empty()) << problems.front();
  }
}

TEST(BuildCnPropertyTest, ColumnsConserveMass) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    NBestList list = RandomList(rng, 1 + static_cast<int>(rng() % 10), 6);
    std::vector<double> ll;
    for (const Hypothesis &h : list.hypotheses) ll.push_back(h.loglik);
    list.posteriors = NBestPosteriors(ll);
    const Mesh mesh = BuildMesh(list, 1.0);
    for (const Bin &b : mesh.ToConfusionNetwork("m").bins) {
      EXPECT_NEAR(b.Total(), 1.0, 1e-9);
    }
  }
}

TEST(BuildCnPropertyTest, HypothesesRecoverableAndMassSumsToOne) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const NBestList list = RandomList(rng, 1 + static_cast<int>(rng() % 6), 4);
    CnBuildOptions options;
    options.max_arcs = 0;
    const ConfusionNetwork cn = BuildConfusionNetwork(list, options, nullptr);
    if (cn.bins.size() > 6) continue;
    ++checked;
    double total = 0.0;
    std::set<Sentence> paths;
    for (const auto &[tokens, p] : testing::ExpandPaths(cn)) {
      total += p;
      paths.insert(tokens);
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
    for (const Hypothesis &h : list.hypotheses) {
      EXPECT_TRUE(paths.contains(NormalizeTokens(h.tokens)));
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(BuildCnPropertyTest, Deterministic) {
  std::mt19937_64 rng(2);
  const NBestList list = RandomList(rng, 12, 8);
  EXPECT_EQ(SerializeConfusionNetwork(BuildConfusionNetwork(list, {}, nullptr)),
            SerializeConfusionNetwork(BuildConfusionNetwork(list, {}, nullptr)));
}

}  // namespace
}  // namespace cnlm
