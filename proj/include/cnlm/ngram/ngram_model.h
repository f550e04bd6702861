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
// Backoff n-gram model with ARPA text I/O and perplexity evaluation.

#ifndef CNLM_NGRAM_NGRAM_MODEL_H_
#define CNLM_NGRAM_NGRAM_MODEL_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnlm/core/perplexity.h"
#include "cnlm/core/vocabulary.h"
#include "cnlm/ngram/counts.h"

namespace cnlm {

struct NGramEntry {
  double log10_prob = 0.0;
  double log10_bow = 0.0;
};

struct NGramHash {
  std::size_t operator()(const NGram &gram) const noexcept;
};

using NGramTable = std::unordered_map<NGram, NGramEntry, NGramHash>;

// Log10 probability stored for the unigram <s>, which is never predicted.
inline constexpr double kArpaLogZero = -99.0;

class NGramModel {
 public:
  NGramModel(int order, Vocabulary vocab);

  int order() const { return order_; }
  const Vocabulary &vocab() const { return vocab_; }

  void Set(const NGram &gram, const NGramEntry &entry);
  const NGramEntry *Find(const NGram &gram) const;
  NGramEntry *MutableFind(const NGram &gram);
  const NGramTable &entries(int n) const;

  // Natural-log P(word | context) by standard backoff. Only the last
  // order-1 context ids are used. Returns -inf when `word` has no unigram.
  double LogProb(std::span<const TokenId> context, TokenId word) const;

  // Words a model may predict: the vocabulary minus <s>, <pad>, *DELETE*.
  std::vector<TokenId> PredictableWords() const;

 private:
  int order_;
  Vocabulary vocab_;
  std::vector<NGramTable> tables_;
};

// ARPA text. Entries of each order are sorted by their token strings; the
// highest order carries no backoff column.
std::string WriteArpa(const NGramModel &model);

// Throws ParseError with the offending line number.
NGramModel ReadArpa(std::string_view text);

// Sentences are tokenized, normalized and OOV-mapped; every token must be in
// the model vocabulary. Throws NumericError on a zero-probability event.
PerplexityResult NGramPerplexity(const NGramModel &model,
                                 std::span<const Sentence> corpus);

}  // namespace cnlm

#endif  // CNLM_NGRAM_NGRAM_MODEL_H_
