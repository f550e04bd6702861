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
//
// Interpolated modified Kneser-Ney smoothing on expected (fractional)
// counts. With all occurrence probabilities equal to 1 this is classical
// modified Kneser-Ney.

#ifndef CNLM_NGRAM_KNESER_NEY_H_
#define CNLM_NGRAM_KNESER_NEY_H_

#include <array>
#include <vector>

#include "cnlm/core/vocabulary.h"
#include "cnlm/ngram/counts.h"
#include "cnlm/ngram/ngram_model.h"

namespace cnlm {

inline constexpr double kFallbackDiscount = 0.75;

struct Discounts {
  double d1 = kFallbackDiscount;
  double d2 = kFallbackDiscount;
  double d3plus = kFallbackDiscount;
  bool fallback = true;  // set when the counts-of-counts were degenerate
};

// Expected counts-of-counts n1..n4: sum over n-grams of P(count = k).
std::array<double, 4> ExpectedCountsOfCounts(const OccurrenceMap &grams);

Discounts DiscountsFromCountsOfCounts(const std::array<double, 4> &n);

Discounts EstimateDiscounts(const OccurrenceMap &grams);

// Trains a backoff model of order counts.order() over `vocab`. The highest
// order uses the expected counts as given. Lower orders use expected
// continuation counts: every left extension vw contributes
// P(c(vw) > 0) to w, except n-grams starting with <s>, which keep their own
// counts. The unigram level is interpolated with a uniform distribution over
// the predictable words. `discounts`, when given, receives the discounts
// used per order (index 0 = unigrams). Throws Error when there are no counts.
NGramModel TrainKneserNey(const FractionalCounts &counts,
                          const Vocabulary &vocab,
                          std::vector<Discounts> *discounts = nullptr);

}  // namespace cnlm

#endif  // CNLM_NGRAM_KNESER_NEY_H_
