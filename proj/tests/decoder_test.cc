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
#include <set>

#include "cnlm/core/error.h"
#include "cnlm/decoder/beam_search.h"
#include "cnlm/decoder/toy_scorer.h"
#include "cnlm/nbest/postprocess.h"
#include "oracles.h"

namespace cnlm {
namespace {

using testing::EnumerateHypotheses;
using testing::GreedyDecode;
using testing::RandomScorer;
using testing::TableScorer;

double LogSumExp(const std::vector<double> &v) {
  double max = -INFINITY;
  for (double x : v) max = std::max(max, x);
  double z = 0.0;
  for (double x : v) {
    if (x != -INFINITY) z += std::exp(x - max);
  }
  return max + std::log(z);
}

void ExpectSameHypotheses(const std::vector<Hypothesis> &a,
                          const std::vector<Hypothesis> &b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].tokens, b[i].tokens) << "rank " << i;
    EXPECT_NEAR(a[i].loglik, b[i].loglik, 1e-9) << "rank " << i;
  }
}

TEST(BeamSearchTest, WideBeamMatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomScorer scorer({"a", "b"}, seed);
    const std::vector<Hypothesis> all = EnumerateHypotheses(scorer, {}, 3);
    ASSERT_EQ(all.size(), 15u);
    const DecodeResult r = BeamSearch(scorer, {}, 27, 3);
    ExpectSameHypotheses(r.nbest.hypotheses, all);
    std::vector<Hypothesis> top5(all.begin(), all.begin() + 5);
    std::vector<Hypothesis> got5(r.nbest.hypotheses.begin(),
                                 r.nbest.hypotheses.begin() + 5);
    ExpectSameHypotheses(got5, top5);
  }
}

TEST(BeamSearchTest, BeamOfOneIsGreedy) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RandomScorer scorer({"a", "b", "c", "d"}, seed, 1.0);
    const DecodeResult r = BeamSearch(scorer, {}, 1, 6);
    ASSERT_EQ(r.nbest.size(), 1u);
    const Hypothesis g = GreedyDecode(scorer, {}, 6);
    EXPECT_EQ(r.nbest.hypotheses[0].tokens, g.tokens);
    EXPECT_NEAR(r.nbest.hypotheses[0].loglik, g.loglik, 1e-12);
  }
}

TEST(BeamSearchTest, HypothesesArePathsInGraph) {
  const RandomScorer scorer({"a", "b", "c"}, 5);
  const DecodeResult r = BeamSearch(scorer, {}, 4, 8);
  ASSERT_EQ(r.leaves.size(), r.nbest.size());
  for (std::size_t i = 0; i < r.nbest.size(); ++i) {
    const Hypothesis &h = r.nbest.hypotheses[i];
    Sentence path;
    for (TokenId id : r.graph.PathTokens(r.leaves[i])) {
      path.push_back(scorer.vocab().Word(id));
    }
    EXPECT_EQ(path, h.tokens);
    EXPECT_NEAR(r.graph.PathLogProb(r.leaves[i]), h.loglik, 1e-9);
    EXPECT_LE(h.loglik, 0.0);
    if (i > 0) EXPECT_GE(r.nbest.hypotheses[i - 1].loglik, h.loglik);
  }
  EXPECT_EQ(r.graph.node(0).token, Vocabulary::kPadId);
}

TEST(BeamSearchTest, FigureStyleBranching) {
  const std::vector<Token> words{"No", ",", "they", "are", "on", "at",
                                 "the", "outside", "."};
  std::map<std::string, std::map<Token, double>> rows{
      {"", {{"No", 1.0}}},
      {"No", {{",", 1.0}}},
      {"No ,", {{"they", 1.0}}},
      {"No , they", {{"are", 1.0}}},
      {"No , they are", {{"on", 0.45}, {"at", 0.35}, {"outside", 0.2}}},
      {"No , they are on", {{"the", 1.0}}},
      {"No , they are at", {{"the", 0.9}, {"outside", 0.1}}},
      {"No , they are on the", {{"outside", 1.0}}},
      {"No , they are at the", {{"outside", 1.0}}},
  };
  for (const std::string p :
       {"No , they are outside", "No , they are on the outside",
        "No , they are at the outside", "No , they are at outside"}) {
    rows[p] = {{".", 1.0}};
    rows[p + " ."] = {{"</s>", 1.0}};
  }
  const TableScorer scorer(words, rows);
  const DecodeResult r = BeamSearch(scorer, {}, 5, 12);

  // The node for "are" has both "on" and "at" children; "on" scores higher.
  int on = -1;
  int at = -1;
  for (int id = 1; id < static_cast<int>(r.graph.size()); ++id) {
    const BeamNode &n = r.graph.node(id);
    if (n.parent > 0 && r.graph.node(n.parent).token == scorer.vocab().At("are")) {
      if (n.token == scorer.vocab().At("on")) on = id;
      if (n.token == scorer.vocab().At("at")) at = id;
    }
  }
  ASSERT_GE(on, 0);
  ASSERT_GE(at, 0);
  EXPECT_GT(r.graph.node(on).score, r.graph.node(at).score);

  NBestList list = r.nbest;
  list.source = {"nein", "sie", "sind", "draussen"};
  const NBestList post = PostprocessNBest(list);
  EXPECT_EQ(NormalizeTokens(post.hypotheses[0].tokens),
            (Sentence{"no", "they", "are", "on", "the", "outside"}));
}

TEST(DiverseBeamSearchTest, OneGroupEqualsBeamSearch) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomScorer scorer({"a", "b", "c", "d"}, seed);
    for (double lambda : {0.0, 0.5, 3.0}) {
      BeamSearchOptions o;
      o.beam = 4;
      o.groups = 1;
      o.diversity = lambda;
      o.max_len = 6;
      const DecodeResult d = DiverseBeamSearch(scorer, {}, o);
      const DecodeResult b = BeamSearch(scorer, {}, 4, 6);
      ASSERT_EQ(d.nbest.size(), b.nbest.size());
      for (std::size_t i = 0; i < d.nbest.size(); ++i) {
        EXPECT_EQ(d.nbest.hypotheses[i], b.nbest.hypotheses[i]);
      }
      EXPECT_EQ(d.graph.Format("g", scorer.vocab()), b.graph.Format("g", scorer.vocab()));
    }
  }
}

TEST(DiverseBeamSearchTest, ZeroPenaltyRepeatsSubBeam) {
  const RandomScorer scorer({"a", "b", "c"}, 9);
  BeamSearchOptions o;
  o.beam = 6;
  o.groups = 3;
  o.diversity = 0.0;
  o.max_len = 6;
  const DecodeResult d = DiverseBeamSearch(scorer, {}, o);
  const DecodeResult b = BeamSearch(scorer, {}, 2, 6);
  for (const auto &group : d.group_hypotheses) {
    ASSERT_EQ(group.size(), b.nbest.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      EXPECT_EQ(group[i], b.nbest.hypotheses[i]);
    }
  }
  ASSERT_EQ(d.nbest.size(), b.nbest.size());
}

TEST(DiverseBeamSearchTest, LaterGroupsAvoidEarlierTokens) {
  // Step 1 scores: a .4, b .3, c .2, </s> .1 with lambda 0.5:
  //   group 1 keeps {a, b};
  //   group 2 sees a -1.416, b -1.704, c -1.609 -> {a, c};
  //   group 3 sees a -1.916, b -1.704, c -2.109 -> {b, a}.
  const TableScorer scorer(
      {"a", "b", "c"}, {{"", {{"a", 0.4}, {"b", 0.3}, {"c", 0.2}, {"</s>", 0.1}}}});
  BeamSearchOptions o;
  o.beam = 6;
  o.groups = 3;
  o.diversity = 0.5;
  o.max_len = 3;
  const DecodeResult d = DiverseBeamSearch(scorer, {}, o);
  std::vector<std::set<Token>> first(3);
  for (int id = 1; id < static_cast<int>(d.graph.size()); ++id) {
    const BeamNode &n = d.graph.node(id);
    if (n.parent == 0) first[n.group].insert(scorer.vocab().Word(n.token));
  }
  EXPECT_EQ(first[0], (std::set<Token>{"a", "b"}));
  EXPECT_EQ(first[1], (std::set<Token>{"a", "c"}));
  EXPECT_EQ(first[2], (std::set<Token>{"a", "b"}));
  for (const Hypothesis &h : d.nbest.hypotheses) {
    // Reported scores are the unpenalized sums.
    double sum = 0.0;
    std::vector<TokenId> prefix;
    for (const Token &t : h.tokens) {
      sum += scorer.NextLogProbs({}, prefix)[static_cast<std::size_t>(scorer.vocab().At(t))];
      prefix.push_back(scorer.vocab().At(t));
    }
    EXPECT_NEAR(sum, h.loglik, 1e-12);
  }
}

TEST(DiverseBeamSearchTest, GroupsMustDivideBeam) {
  const RandomScorer scorer({"a"}, 1);
  BeamSearchOptions o;
  o.beam = 5;
  o.groups = 2;
  EXPECT_THROW(DiverseBeamSearch(scorer, {}, o), Error);
}

class WrongSizeScorer : public Scorer {
 public:
  const Vocabulary &vocab() const override { return vocab_; }
  std::vector<double> NextLogProbs(const SourceContext &,
                                   std::span<const TokenId>) const override {
    return {0.0};
  }

 private:
  Vocabulary vocab_;
};

TEST(BeamSearchTest, ScorerSizeMismatchThrows) {
  EXPECT_THROW(BeamSearch(WrongSizeScorer(), {}, 2, 3), Error);
}

std::vector<SentencePair> RepeatedPair(int copies) {
  return std::vector<SentencePair>(
      static_cast<std::size_t>(copies),
      SentencePair{{"ich", "moechte", "kaffee"}, {"i", "would", "like", "coffee"}});
}

TEST(ToyScorerTest, MemorizesRepeatedPair) {
  const ToyScorer scorer = TrainToyScorer(RepeatedPair(100));
  const Hypothesis g = GreedyDecode(scorer, {"ich", "moechte", "kaffee"}, 10);
  EXPECT_EQ(g.tokens, (Sentence{"i", "would", "like", "coffee", "</s>"}));
}

TEST(ToyScorerTest, UnseenSourceFallsBackToBigramPrior) {
  std::vector<SentencePair> corpus = RepeatedPair(100);
  corpus.push_back({{"tee"}, {"tea"}});
  const ToyScorer scorer = TrainToyScorer(corpus);
  const SourceContext unseen = scorer.Prepare({"zzz"});
  const SourceContext empty = scorer.Prepare({});
  const std::vector<TokenId> prefix{scorer.vocab().At("i")};
  const std::vector<double> a = scorer.NextLogProbs(unseen, prefix);
  const std::vector<double> b = scorer.NextLogProbs(empty, prefix);
  for (std::size_t v = 0; v < a.size(); ++v) EXPECT_EQ(a[v], b[v]);
  // Producible: 5 words + </s>; a uniform lexicon cancels out, leaving the
  // add-one bigram estimate after "i".
  const double bigram_would = (100.0 + 1.0) / (100.0 + 6.0);
  EXPECT_NEAR(std::exp(a[static_cast<std::size_t>(scorer.vocab().At("would"))]),
              bigram_would, 1e-12);
}

TEST(ToyScorerTest, ZeroLexiconWeightLeavesConditionedBigram) {
  ToyScorerOptions options;
  options.lexicon_weight = 0.0;
  const ToyScorer scorer = TrainToyScorer(RepeatedPair(100), options);
  const std::vector<double> lp =
      scorer.NextLogProbs(scorer.Prepare({"kaffee"}), std::vector<TokenId>{});
  // Global add-one bigram: (100 + 1) / (100 + 5) over 4 words + </s>. The
  // bigram conditioned on "kaffee" has seen "i" 100 times after <s> and is
  // interpolated with it at prior weight 1.
  const double global = 101.0 / 105.0;
  EXPECT_NEAR(std::exp(lp[static_cast<std::size_t>(scorer.vocab().At("i"))]),
              (100.0 + global) / 101.0, 1e-12);
}

TEST(ToyScorerTest, SpelledAlikeTokensFollowTheSource) {
  std::vector<SentencePair> corpus;
  for (int i = 0; i < 20; ++i) {
    corpus.push_back({{"zum", "olivia"}, {"to", "Olivia"}});
    corpus.push_back({{"zum", "sakura"}, {"to", "Sakura"}});
  }
  const ToyScorer scorer = TrainToyScorer(corpus);
  const std::vector<TokenId> prefix{scorer.vocab().At("to")};
  const std::size_t olivia = static_cast<std::size_t>(scorer.vocab().At("Olivia"));
  const std::size_t sakura = static_cast<std::size_t>(scorer.vocab().At("Sakura"));
  const std::vector<double> a = scorer.NextLogProbs(scorer.Prepare({"zum", "olivia"}), prefix);
  const std::vector<double> b = scorer.NextLogProbs(scorer.Prepare({"zum", "sakura"}), prefix);
  EXPECT_GT(a[olivia], a[sakura]);
  EXPECT_GT(b[sakura], b[olivia]);
  const Hypothesis g = GreedyDecode(scorer, {"zum", "sakura"}, 5);
  EXPECT_EQ(g.tokens, (Sentence{"to", "Sakura", "</s>"}));
}

TEST(ToyScorerTest, RowsNormalize) {
  std::vector<SentencePair> corpus = RepeatedPair(60);
  for (int i = 0; i < 60; ++i) {
    corpus.push_back({{"tee", "bitte"}, {"tea", "please", i % 2 ? "now" : "."}});
  }
  const ToyScorer scorer = TrainToyScorer(corpus);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenId> prefix(rng() % 5);
    for (TokenId &t : prefix) {
      t = static_cast<TokenId>(Vocabulary::kNumSpecial +
                               rng() % (scorer.vocab().size() - Vocabulary::kNumSpecial));
    }
    const SourceContext ctx = scorer.Prepare({trial % 2 ? "tee" : "ich", "kaffee"});
    const std::vector<double> lp = scorer.NextLogProbs(ctx, prefix);
    EXPECT_NEAR(LogSumExp(lp), 0.0, 1e-6);
    EXPECT_EQ(lp[Vocabulary::kBosId], -INFINITY);
    EXPECT_EQ(lp[Vocabulary::kPadId], -INFINITY);
  }
}

TEST(ToyScorerTest, EmptyCorpusThrows) {
  EXPECT_THROW(TrainToyScorer({}), Error);
}

}  // namespace
}  // namespace cnlm
