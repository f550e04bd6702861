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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criteria 6 and 7 run the full default pipeline twice in
// a temporary directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/cnbuild/mesh.h"
#include "cnlm/core/error.h"
#include "cnlm/core/format.h"
#include "cnlm/core/text_io.h"
#include "cnlm/core/token.h"
#include "cnlm/core/vocabulary.h"
#include "cnlm/decoder/beam_search.h"
#include "cnlm/nbest/postprocess.h"
#include "cnlm/ngram/counts.h"
#include "cnlm/ngram/kneser_ney.h"
#include "cnlm/ngram/ngram_model.h"
#include "cnlm/ngram/poisson_binomial.h"
#include "cnlm/pipeline/pipeline.h"
#include "cnlm/rnn/gradient_check.h"
#include "cnlm/rnn/rnn_lm.h"
#include "oracles.h"

namespace cnlm {
namespace {

namespace fs = std::filesystem;

// Collects violations; keeps the first message and a running maximum.
class Tally {
 public:
  void Expect(bool ok, const std::string &what) {
    ++checks_;
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  void Near(double got, double want, double tol, const std::string &what) {
    const double err = std::abs(got - want);
    if (std::isfinite(err)) max_err_ = std::max(max_err_, err);
    Expect(err <= tol, what + ": got " + std::to_string(got) + " want " +
                           std::to_string(want));
  }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%ld checks, max error %.3g", checks_, max_err_);
    std::string out = buf;
    if (!ok()) out += ", " + std::to_string(failures_) + " failed, first: " + first_;
    return out;
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  double max_err_ = 0.0;
  std::string first_;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failed_criteria = 0;

void Report(int id, double limit_seconds, const std::function<Outcome()> &body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception &e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool pass = outcome.pass;
  if (limit_seconds > 0 && seconds >= limit_seconds) {
    pass = false;
    outcome.detail += "; runtime limit exceeded";
  }
  char timing[96];
  if (limit_seconds > 0) {
    std::snprintf(timing, sizeof(timing), "%.1f s, limit %.0f s", seconds, limit_seconds);
  } else {
    std::snprintf(timing, sizeof(timing), "%.1f s", seconds);
  }
  std::printf("criterion %d: %s (%s) %s\n", id, pass ? "PASS" : "FAIL", timing,
              outcome.detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failed_criteria;
}

const std::vector<Sentence> &TenSentences() {
  static const std::vector<Sentence> corpus{
      {"the", "cat", "sat"},        {"the", "dog", "sat"},
      {"a", "cat", "ran"},          {"the", "cat", "ran", "away"},
      {"a", "dog", "sat", "down"},  {"the", "dog", "ran"},
      {"a", "cat", "sat", "down"},  {"the", "bird", "sat"},
      {"a", "bird", "ran", "away"}, {"the", "cat", "sat", "down"},
  };
  return corpus;
}

std::vector<Sentence> RandomCorpus(std::mt19937_64 &rng, int size) {
  const Sentence words{"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<Sentence> corpus;
  for (int i = 0; i < size; ++i) {
    Sentence s(1 + rng() % 8);
    // Skewed draws so that counts of counts are varied.
    for (Token &w : s) w = words[std::min(rng() % 8, rng() % 8)];
    corpus.push_back(s);
  }
  return corpus;
}

void CompareModels(const NGramModel &a, const NGramModel &b, Tally *t,
                   const std::string &label) {
  t->Expect(a.order() == b.order(), label + ": order differs");
  for (int n = 1; n <= std::min(a.order(), b.order()); ++n) {
    t->Expect(a.entries(n).size() == b.entries(n).size(),
              label + ": entry count differs at order " + std::to_string(n));
    for (const auto &[gram, entry] : a.entries(n)) {
      const NGramEntry *other = b.Find(gram);
      t->Expect(other != nullptr, label + ": missing entry");
      if (other == nullptr) continue;
      t->Near(entry.log10_prob, other->log10_prob, 1e-6, label + " log10 prob");
      t->Near(entry.log10_bow, other->log10_bow, 1e-6, label + " backoff");
    }
  }
}

Outcome Criterion1() {
  Tally t;
  std::mt19937_64 rng(101);
  const std::vector<std::vector<Sentence>> corpora{TenSentences(), RandomCorpus(rng, 200)};
  for (const std::vector<Sentence> &corpus : corpora) {
    const Vocabulary v = BuildVocab(corpus);
    for (int order = 1; order <= 3; ++order) {
      FractionalCounts from_cn(order);
      for (const Sentence &s : corpus) {
        from_cn.Merge(CountConfusionNetwork(ChainNetwork("chain", s), v, order));
      }
      const NGramModel cn = ReadArpa(WriteArpa(TrainKneserNey(from_cn, v)));
      const NGramModel text = ReadArpa(WriteArpa(TrainKneserNey(CountText(corpus, v, order), v)));
      CompareModels(cn, text, &t, "chain vs text order " + std::to_string(order));
    }
  }
  Tally oracle;
  const std::vector<Sentence> &corpus = TenSentences();
  const Vocabulary v = BuildVocab(corpus);
  for (int order = 1; order <= 3; ++order) {
    const NGramModel m = TrainKneserNey(CountText(corpus, v, order), v);
    const testing::IntegerKneserNey reference(corpus, v, order);
    for (const NGram &ctx : reference.contexts()) {
      for (TokenId w : reference.words()) {
        oracle.Near(m.LogProb(ctx, w), std::log(reference.Prob(ctx, w)), 1e-9,
                    "integer oracle order " + std::to_string(order));
      }
    }
  }
  return {t.ok() && oracle.ok(),
          "chain CN vs text: " + t.Summary() + "; integer oracle: " + oracle.Summary()};
}

Outcome Criterion2() {
  Tally t;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> ps(rng() % 13);
    for (double &p : ps) p = rng() % 6 == 0 ? 1.0 : u(rng);
    const std::vector<double> full = testing::EnumerateCountDistribution(ps);
    for (int kmax : {4, 5, 12}) {
      const std::vector<double> dp = PoissonBinomial(ps, kmax);
      t.Expect(dp.size() == static_cast<std::size_t>(kmax) + 1, "bucket count");
      for (int k = 0; k <= kmax && static_cast<std::size_t>(k) < dp.size(); ++k) {
        double want = 0.0;
        if (k < kmax) {
          if (static_cast<std::size_t>(k) < full.size()) want = full[static_cast<std::size_t>(k)];
        } else {
          for (std::size_t j = static_cast<std::size_t>(kmax); j < full.size(); ++j) want += full[j];
        }
        t.Near(dp[static_cast<std::size_t>(k)], want, 1e-12,
               "P(count=" + std::to_string(k) + ") for " + std::to_string(ps.size()) + " occurrences");
      }
    }
  }
  return {t.ok(), "1000 sets of size 0..12: " + t.Summary()};
}

// Checks the finalized-network invariants directly rather than through
// CheckConfusionNetwork.
void CheckInvariants(const ConfusionNetwork &cn, int max_arcs, Tally *t) {
  const std::string delete_token(kDelete);
  for (const Bin &bin : cn.bins) {
    double sum = 0.0;
    int deletes = 0;
    for (const Arc &arc : bin.arcs) {
      sum += arc.score;
      if (arc.token == delete_token) ++deletes;
    }
    t->Near(sum, 1.0, 1e-9, "bin sum");
    t->Expect(!bin.arcs.empty(), "empty bin");
    t->Expect(max_arcs == 0 || bin.arcs.size() <= static_cast<std::size_t>(max_arcs),
              "too many arcs");
    t->Expect(deletes <= 1, "more than one *DELETE* arc");
    t->Expect(bin.arcs.empty() || deletes < static_cast<int>(bin.arcs.size()),
              "*DELETE*-only bin");
    for (std::size_t i = 1; i < bin.arcs.size(); ++i) {
      t->Expect(bin.arcs[i - 1].score >= bin.arcs[i].score, "arcs not sorted");
    }
  }
}

Outcome Criterion3() {
  Tally invariants, paths;
  const std::vector<Token> words{"a", "b", "c", "the", "The", "8:30", "9:15", "dog"};
  int small = 0, built = 0, unusable = 0;
  std::mt19937_64 rng(303);
  for (std::uint64_t trial = 0; built < 500; ++trial) {
    const testing::RandomScorer scorer(words, 1000 + trial, 1.5);
    const Sentence source(1 + rng() % 6, "q");
    DecodeResult decoded = BeamSearch(scorer, source, 12, 8);
    decoded.nbest.source_id = "list-" + std::to_string(trial);
    decoded.nbest.source = source;
    const std::size_t n = 1 + rng() % 12;
    NBestList post;
    try {
      post = PostprocessNBest(TruncateNBest(decoded.nbest, n));
    } catch (const Error &) {
      // Every hypothesis was empty after post-processing; not an N-best list
      // the builder can receive.
      ++unusable;
      continue;
    }
    ++built;

    const ConfusionNetwork capped = BuildConfusionNetwork(post, {}, nullptr);
    CheckInvariants(capped, 5, &invariants);

    CnBuildOptions unlimited;
    unlimited.max_arcs = 0;
    const ConfusionNetwork full = BuildConfusionNetwork(post, unlimited, nullptr);
    CheckInvariants(full, 0, &invariants);
    if (full.bins.size() > 6) continue;
    ++small;
    double mass = 0.0;
    std::set<Sentence> reachable;
    for (const auto &[tokens, p] : testing::ExpandPaths(full)) {
      mass += p;
      reachable.insert(tokens);
    }
    paths.Near(mass, 1.0, 1e-6, "total path mass");
    for (const Hypothesis &h : post.hypotheses) {
      paths.Expect(reachable.contains(NormalizeTokens(h.tokens)),
                   "hypothesis '" + JoinTokens(h.tokens) + "' is not a path");
    }
  }
  return {invariants.ok() && paths.ok() && small >= 100,
          std::to_string(built) + " lists (" + std::to_string(unusable) +
              " unusable draws skipped); invariants: " + invariants.Summary() + "; paths on " + std::to_string(small) +
              " networks of <= 6 bins: " + paths.Summary()};
}

LossFn BatchLoss(std::vector<RnnSequence> batch, Pooling pooling) {
  return [batch = std::move(batch), pooling](const RnnParams<double> &p,
                                             RnnParams<double> *grad) {
    return RnnLossAndGradient(p, batch, pooling, grad);
  };
}

Outcome Criterion4() {
  const Vocabulary v(std::vector<Token>{"a", "b", "c", "d", "e"});
  ConfusionNetwork cn;
  cn.source_id = "g";
  cn.bins = {Bin{{{"a", 0.7}, {"b", 0.3}}},
             Bin{{{"c", 0.5}, {std::string(kDelete), 0.3}, {"d", 0.2}}},
             Bin{{{"e", 1.0}}}};
  double worst = 0.0;
  std::string where;
  int runs = 0;
  const auto check = [&](const std::string &label, const RnnParams<double> &p,
                         const LossFn &loss) {
    const GradientCheckResult r = CheckGradients(p, loss);
    ++runs;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      where = label + " " + r.worst_tensor + "[" + std::to_string(r.worst_index) + "]";
    }
  };
  std::uint64_t seed = 400;
  for (Pooling pooling : {Pooling::kWeightedMean, Pooling::kMean, Pooling::kMax}) {
    const std::string name(PoolingName(pooling));
    check("nll/" + name, RnnParams<double>::Random(v.size(), 4, ++seed, 0.5),
          BatchLoss({SequenceFromText({"a", "b", "c"}, v),
                     SequenceFromText({"e", "e", "d"}, v)},
                    pooling));
    check("kl/" + name, RnnParams<double>::Random(v.size(), 4, ++seed, 0.5),
          BatchLoss({SequenceFromConfusionNetwork(cn, v)}, pooling));
    check("kl-mixed/" + name, RnnParams<double>::Random(v.size(), 3, ++seed, 0.5),
          BatchLoss({SequenceFromText({"e", "d"}, v), SequenceFromConfusionNetwork(cn, v),
                     SequenceFromText({"b", "b", "a", "c"}, v)},
                    pooling));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max relative error %.3g", worst);
  return {worst < 1e-4, std::to_string(runs) + " checks, " + buf + " at " + where};
}

Outcome Criterion5() {
  Tally wide, greedy, dbs;
  const std::vector<Token> all_words{"a", "b", "c", "d"};
  for (std::size_t w = 1; w <= all_words.size(); ++w) {
    const std::vector<Token> words(all_words.begin(), all_words.begin() + static_cast<long>(w));
    for (int max_len = 1; max_len <= 4; ++max_len) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const testing::RandomScorer scorer(words, seed * 31 + w * 7 + static_cast<std::uint64_t>(max_len));
        const std::vector<Hypothesis> all = testing::EnumerateHypotheses(scorer, {}, max_len);
        for (int extra : {0, 3}) {
          const int beam = static_cast<int>(all.size()) + extra;
          const NBestList got = BeamSearch(scorer, {}, beam, max_len).nbest;
          wide.Expect(got.size() == all.size(), "beam returned a different number of paths");
          for (std::size_t i = 0; i < std::min(got.size(), all.size()); ++i) {
            wide.Expect(got.hypotheses[i].tokens == all[i].tokens, "rank order differs");
            wide.Near(got.hypotheses[i].loglik, all[i].loglik, 1e-9, "log-likelihood");
          }
        }
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const testing::RandomScorer scorer(all_words, seed, 1.0);
    const NBestList got = BeamSearch(scorer, {}, 1, 6).nbest;
    const Hypothesis want = testing::GreedyDecode(scorer, {}, 6);
    greedy.Expect(got.size() == 1 && got.hypotheses[0].tokens == want.tokens,
                  "beam of one differs from greedy");
    if (got.size() == 1) greedy.Near(got.hypotheses[0].loglik, want.loglik, 1e-12, "greedy score");
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const testing::RandomScorer scorer(all_words, seed);
    for (int beam : {1, 3, 6}) {
      for (double lambda : {0.0, 0.5, 3.0}) {
        BeamSearchOptions o;
        o.beam = beam;
        o.groups = 1;
        o.diversity = lambda;
        o.max_len = 6;
        const DecodeResult d = DiverseBeamSearch(scorer, {}, o);
        const DecodeResult b = BeamSearch(scorer, {}, beam, 6);
        dbs.Expect(d.nbest.hypotheses == b.nbest.hypotheses, "one-group DBS differs from beam");
        dbs.Expect(d.graph.Format("g", scorer.vocab()) == b.graph.Format("g", scorer.vocab()),
                   "one-group DBS graph differs from beam");
      }
    }
  }
  return {wide.ok() && greedy.ok() && dbs.ok(),
          "wide beam vs enumeration: " + wide.Summary() + "; B=1 vs greedy: " +
              greedy.Summary() + "; DBS G=1 vs beam: " + dbs.Summary()};
}

fs::path RunFullPipeline(const std::string &name, std::vector<PplRow> *rows) {
  PipelineConfig config;
  config.work_dir = fs::temp_directory_path() / ("cnlm_acceptance_" + name);
  fs::remove_all(config.work_dir);
  RunGenSynthetic(config);
  RunDecode(config);
  for (int n : {1, 10, 20, 50}) {
    config.nbest = n;
    RunBuildCn(config);
    for (const char *source : {"nbest", "cn"}) {
      config.source = source;
      RunTrainNGram(config);
    }
  }
  config.nbest = 20;
  for (const char *mode : {"cn", "cn+nbest"}) {
    config.source = mode;
    RunTrainRnn(config);
  }
  *rows = RunPpl(config);
  return config.work_dir;
}

fs::path first_run;

Outcome Criterion6() {
  std::vector<PplRow> rows;
  first_run = RunFullPipeline("run1", &rows);
  std::map<std::pair<std::string, int>, double> ppl;
  std::string table;
  for (const PplRow &r : rows) {
    ppl[{r.model, r.n}] = r.ppl;
    table += (table.empty() ? "" : ", ") + r.model + "@" + std::to_string(r.n) + "=" +
             FormatFixed(r.ppl, 2);
  }
  Tally t;
  const auto get = [&](const std::string &model, int n) {
    auto it = ppl.find({model, n});
    t.Expect(it != ppl.end(), "missing " + model + " N=" + std::to_string(n));
    return it == ppl.end() ? NAN : it->second;
  };
  for (const char *model : {"ngram-nbest", "ngram-cn"}) {
    t.Expect(get(model, 50) < get(model, 1), std::string(model) + ": N=50 not below N=1");
  }
  for (int n : {10, 20, 50}) {
    t.Expect(get("ngram-cn", n) <= get("ngram-nbest", n),
             "ngram-cn above ngram-nbest at N=" + std::to_string(n));
  }
  t.Expect(get("rnn-cn+nbest", 20) < get("rnn-cn", 20), "rnn-cn+nbest not below rnn-cn at N=20");
  return {t.ok(), (t.ok() ? "" : t.Summary() + "; ") + table};
}

Outcome Criterion7() {
  if (first_run.empty()) return {false, "first run missing"};
  std::vector<PplRow> rows;
  const fs::path second = RunFullPipeline("run2", &rows);
  std::vector<fs::path> files{"decode/nbest.txt", "report.txt"};
  for (const fs::path &dir : {fs::path("cn"), fs::path("lm")}) {
    for (const auto &entry : fs::directory_iterator(first_run / dir)) {
      files.push_back(dir / entry.path().filename());
    }
  }
  std::sort(files.begin(), files.end());
  Tally t;
  int arpa = 0, cn = 0, nbest = 0;
  for (const fs::path &f : files) {
    const std::string name = f.filename().string();
    if (f.extension() == ".arpa") ++arpa;
    if (name.starts_with("cn.")) ++cn;
    if (name.starts_with("nbest")) ++nbest;
    t.Expect(fs::exists(second / f) && ReadFile(first_run / f) == ReadFile(second / f),
             f.string() + " differs");
  }
  t.Expect(arpa == 8 && cn == 4 && nbest == 5, "unexpected set of output files");
  return {t.ok(), std::to_string(files.size()) + " files compared (" + std::to_string(nbest) +
                      " N-best, " + std::to_string(cn) + " CN, " + std::to_string(arpa) +
                      " ARPA, report, RNN models and logs): " + t.Summary()};
}

Outcome Criterion8() {
  Tally t;
  const std::vector<Sentence> test{{"a", "b", "c"}, {"d"}, {"<unk>", "a", "a", "e"}, {"e", "b"}};
  const Vocabulary v(std::vector<Token>{"a", "b", "c", "d", "e"});

  NGramModel uniform(1, v);
  const std::vector<TokenId> predictable = uniform.PredictableWords();
  for (TokenId w : predictable) {
    uniform.Set({w}, {-std::log10(static_cast<double>(predictable.size())), 0.0});
  }
  uniform.Set({Vocabulary::kBosId}, {kArpaLogZero, 0.0});
  const double ngram_ppl = NGramPerplexity(uniform, test).ppl;
  t.Near(ngram_ppl, static_cast<double>(predictable.size()), 1e-9, "uniform n-gram");
  t.Near(ngram_ppl, testing::DirectNGramPerplexity(uniform, test), 1e-9, "uniform n-gram loop");

  const auto zeros = RnnParams<double>::Zeros(v.size(), 4);
  const double rnn_ppl = RnnPerplexity(zeros, v, test).ppl;
  t.Near(rnn_ppl, static_cast<double>(v.size()), 1e-9, "uniform RNN");
  t.Near(rnn_ppl, testing::DirectRnnPerplexity(zeros, v, test), 1e-9, "uniform RNN loop");

  std::mt19937_64 rng(808);
  const std::vector<Sentence> corpus = RandomCorpus(rng, 100);
  const Vocabulary cv = BuildVocab(corpus);
  const std::vector<Sentence> held_out = RandomCorpus(rng, 30);
  for (int order = 1; order <= 3; ++order) {
    const NGramModel m = TrainKneserNey(CountText(corpus, cv, order), cv);
    t.Near(NGramPerplexity(m, held_out).ppl, testing::DirectNGramPerplexity(m, held_out), 1e-9,
           "Kneser-Ney order " + std::to_string(order));
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = RnnParams<double>::Random(cv.size(), 6, seed, 0.5);
    t.Near(RnnPerplexity(p, cv, held_out).ppl, testing::DirectRnnPerplexity(p, cv, held_out),
           1e-9, "random RNN");
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "uniform n-gram %.12f (|V|=%zu), uniform RNN %.12f (|V|=%zu); ",
                ngram_ppl, predictable.size(), rnn_ppl, v.size());
  return {t.ok(), buf + t.Summary()};
}

}  // namespace
}  // namespace cnlm

int main() {
  using namespace cnlm;
  Report(1, 5, Criterion1);
  Report(2, 10, Criterion2);
  Report(3, 30, Criterion3);
  Report(4, 60, Criterion4);
  Report(5, 10, Criterion5);
  Report(6, 15 * 60, Criterion6);
  Report(7, 0, Criterion7);
  Report(8, 0, Criterion8);
  std::printf("summary: %d of 8 criteria failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
