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

#include "cnlm/ngram/kneser_ney.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "cnlm/core/error.h"
#include "cnlm/ngram/poisson_binomial.h"

namespace cnlm {
namespace {

// Buckets 0..4 exact, 5 = five or more.
constexpr int kBuckets = 5;

struct GramStats {
  double expected = 0.0;
  double discount = 0.0;
};

GramStats Stats(const OccurrenceList &list, const Discounts &d) {
  const std::vector<double> b = PoissonBinomial(list, kBuckets);
  GramStats s;
  s.expected = std::accumulate(list.begin(), list.end(), 0.0);
  s.discount = d.d1 * b[1] + d.d2 * b[2] + d.d3plus * (b[3] + b[4] + b[5]);
  return s;
}

// P(c > 0) = 1 - prod(1 - p), computed without cancellation.
double PresenceProbability(const OccurrenceList &list) {
  double log_absent = 0.0;
  for (double p : list) log_absent += std::log1p(-p);
  return -std::expm1(log_absent);
}

void EnsureEntry(NGramModel *model, const NGram &gram) {
  if (model->Find(gram) != nullptr) return;
  NGram context(gram.begin(), gram.end() - 1);
  if (!context.empty()) EnsureEntry(model, context);
  const double lp = model->LogProb(context, gram.back());
  if (!std::isfinite(lp)) throw NumericError("backoff probability is zero");
  model->Set(gram, {lp / std::numbers::ln10, 0.0});
}

}  // namespace

std::array<double, 4> ExpectedCountsOfCounts(const OccurrenceMap &grams) {
  std::array<double, 4> n{};
  for (const auto &[gram, list] : grams) {
    const std::vector<double> b = PoissonBinomial(list, kBuckets);
    for (std::size_t k = 0; k < 4; ++k) n[k] += b[k + 1];
  }
  return n;
}

Discounts DiscountsFromCountsOfCounts(const std::array<double, 4> &n) {
  Discounts d;
  if (!(n[0] > 0.0 && n[1] > 0.0 && n[2] > 0.0 && n[3] > 0.0)) return d;
  const double y = n[0] / (n[0] + 2.0 * n[1]);
  const double d1 = 1.0 - 2.0 * y * n[1] / n[0];
  const double d2 = 2.0 - 3.0 * y * n[2] / n[1];
  const double d3plus = 3.0 - 4.0 * y * n[3] / n[2];
  // A non-positive discount could leave a context with no mass for unseen
  // words, so it is treated like degenerate counts.
  if (!(d1 > 0.0 && d2 > 0.0 && d3plus > 0.0)) return d;
  d.d1 = d1;
  d.d2 = d2;
  d.d3plus = d3plus;
  d.fallback = false;
  return d;
}

Discounts EstimateDiscounts(const OccurrenceMap &grams) {
  return DiscountsFromCountsOfCounts(ExpectedCountsOfCounts(grams));
}

NGramModel TrainKneserNey(const FractionalCounts &counts,
                          const Vocabulary &vocab,
                          std::vector<Discounts> *discounts) {
  const int order = counts.order();
  if (counts.grams(1).empty()) throw Error("cannot train on empty counts");

  // levels[k-1] holds the (adjusted) occurrence lists used at order k.
  std::vector<OccurrenceMap> lower(static_cast<std::size_t>(order - 1));
  for (int k = order - 1; k >= 1; --k) {
    OccurrenceMap &level = lower[static_cast<std::size_t>(k - 1)];
    for (const auto &[gram, list] : counts.grams(k)) {
      if (gram[0] == Vocabulary::kBosId) level[gram] = list;
    }
    for (const auto &[gram, list] : counts.grams(k + 1)) {
      const double q = PresenceProbability(list);
      if (q > 0.0) level[NGram(gram.begin() + 1, gram.end())].push_back(q);
    }
  }
  const auto level = [&](int k) -> const OccurrenceMap & {
    return k == order ? counts.grams(order)
                      : lower[static_cast<std::size_t>(k - 1)];
  };

  NGramModel model(order, vocab);
  const std::vector<TokenId> predictable = model.PredictableWords();
  if (discounts != nullptr) discounts->clear();

  for (int k = 1; k <= order; ++k) {
    const OccurrenceMap &grams = level(k);
    const Discounts d = EstimateDiscounts(grams);
    if (discounts != nullptr) discounts->push_back(d);

    if (k == 1) {
      std::unordered_map<TokenId, GramStats> stats;
      double total = 0.0;
      double discounted = 0.0;
      for (const auto &[gram, list] : grams) {
        const GramStats s = Stats(list, d);
        stats[gram[0]] = s;
        total += s.expected;
        discounted += s.discount;
      }
      if (!(total > 0.0)) throw Error("cannot train on empty counts");
      const double gamma = discounted / total;
      const double uniform = 1.0 / static_cast<double>(predictable.size());
      for (TokenId w : predictable) {
        double p = gamma * uniform;
        if (auto it = stats.find(w); it != stats.end()) {
          p += (it->second.expected - it->second.discount) / total;
        }
        model.Set({w}, {std::log10(p), 0.0});
      }
      model.Set({Vocabulary::kBosId}, {kArpaLogZero, 0.0});
      continue;
    }

    // std::map keeps n-grams sharing a context adjacent.
    auto it = grams.begin();
    while (it != grams.end()) {
      const NGram context(it->first.begin(), it->first.end() - 1);
      std::vector<std::pair<TokenId, GramStats>> group;
      double total = 0.0;
      double discounted = 0.0;
      for (; it != grams.end() &&
             std::equal(context.begin(), context.end(), it->first.begin());
           ++it) {
        const GramStats s = Stats(it->second, d);
        group.emplace_back(it->first.back(), s);
        total += s.expected;
        discounted += s.discount;
      }
      const double gamma = discounted / total;
      const NGram shorter(context.begin() + 1, context.end());
      NGram gram = context;
      gram.push_back(kNoToken);
      for (const auto &[w, s] : group) {
        const double p = (s.expected - s.discount) / total +
                         gamma * std::exp(model.LogProb(shorter, w));
        gram.back() = w;
        model.Set(gram, {std::log10(p), 0.0});
      }
      EnsureEntry(&model, context);
      model.MutableFind(context)->log10_bow = std::log10(gamma);
    }
  }
  return model;
}

}  // namespace cnlm
