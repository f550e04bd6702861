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
// Fractional n-gram counts. Every occurrence of an n-gram carries the
// probability that it really occurred; plain text is the special case where
// all of them are 1. The count of an n-gram is then a sum of independent
// Bernoulli variables whose expectation is the sum of the list.

#ifndef CNLM_NGRAM_COUNTS_H_
#define CNLM_NGRAM_COUNTS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/core/vocabulary.h"

namespace cnlm {

using NGram = std::vector<TokenId>;
using OccurrenceList = std::vector<double>;
using OccurrenceMap = std::map<NGram, OccurrenceList>;

// Occurrence lists for all n-gram lengths 1..order. The unigram <s> is never
// stored since it is never predicted.
class FractionalCounts {
 public:
  explicit FractionalCounts(int order);

  int order() const { return order_; }

  // Appends one occurrence; `prob` must lie in (0, 1].
  void Add(const NGram &gram, double prob);

  // Concatenates `other`'s occurrence lists into this one.
  void Merge(const FractionalCounts &other);

  // N-grams of length `n` (1..order).
  const OccurrenceMap &grams(int n) const;

  double ExpectedCount(const NGram &gram) const;
  bool empty() const;

  // Debug dump, one line per n-gram: "w1 w2 <TAB> expected <TAB> m".
  std::string Dump(const Vocabulary &vocab) const;

 private:
  int order_;
  std::vector<OccurrenceMap> by_length_;
};

// Counts every n-gram (n <= order) of the sentences wrapped in <s> ... </s>.
// Tokens must already be in `vocab`.
FractionalCounts CountText(std::span<const Sentence> corpus,
                           const Vocabulary &vocab, int order);

struct CnCountOptions {
  // Occurrences less likely than this are dropped.
  double min_prob = 1e-6;
  // How many consecutive *DELETE* arcs a window may skip; negative means no
  // limit beyond min_prob.
  int max_skip = -1;
};

// Counts n-grams over a finalized confusion network framed by virtual <s>
// and </s> bins of score 1. Windows run over consecutive bins; taking a
// *DELETE* arc skips its bin and multiplies in its score. An occurrence's
// probability is the product of the traversed scores; all ways of reading
// the same n-gram from the same start bin are mutually exclusive and are
// summed into one occurrence.
FractionalCounts CountConfusionNetwork(const ConfusionNetwork &cn,
                                       const Vocabulary &vocab, int order,
                                       const CnCountOptions &options = {});

}  // namespace cnlm

#endif  // CNLM_NGRAM_COUNTS_H_
