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

#ifndef CNLM_DECODER_TOY_SCORER_H_
#define CNLM_DECODER_TOY_SCORER_H_

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cnlm/decoder/scorer.h"

namespace cnlm {

struct SentencePair {
  Sentence source;
  Sentence target;
};

struct ToyScorerOptions {
  // Exponent of the lexicon ratio; 0 drops it.
  double lexicon_weight = 0.5;
};

// A small translation model standing in for a neural decoder:
//
//   P(w | prev, src) ~ Pbi(w | prev, src) * (Plex(w | src) / P(w))^lexicon_weight
//
// Pbi mixes, over the known source tokens s with idf weights, bigram
// estimates from the targets of training pairs whose source holds s, each
// interpolated with the global bigram. Plex is the mean over source tokens
// of the target distribution co-occurring with them, and P(w) the target
// unigram, so </s> and words that co-occur with everything stay neutral.
// The ratio is capped at 1 for a token already in the prefix, and for a
// target word spelled like some training source token (ignoring ASCII case)
// but absent from this source. All tables are add-one smoothed over the
// target words plus </s>. A source with no known tokens leaves exactly the
// global bigram model. The other special tokens are never produced.
class ToyScorer : public Scorer {
 public:
  const Vocabulary &vocab() const override { return vocab_; }
  SourceContext Prepare(const Sentence &source) const override;
  std::vector<double> NextLogProbs(
      const SourceContext &source,
      std::span<const TokenId> prefix) const override;

  double lexicon_weight() const { return lexicon_weight_; }

 private:
  friend ToyScorer TrainToyScorer(const std::vector<SentencePair> &,
                                  const ToyScorerOptions &);

  Vocabulary vocab_;
  std::vector<bool> producible_;
  double support_size_ = 0.0;
  double lexicon_weight_ = 0.5;
  std::vector<double> marginal_;
  std::vector<bool> copyable_;
  std::vector<std::string> spelling_;  // lowercased target words

  // Bigram counts over the targets of pairs whose source holds a token.
  struct ConditionedBigram {
    double idf = 0.0;  // log(1 + pairs / pairs containing the token)
    std::unordered_map<TokenId, std::vector<std::pair<TokenId, double>>> rows;
    std::unordered_map<TokenId, double> context_total;
  };
  static constexpr double kConditionedPrior = 1.0;
  std::unordered_map<std::string, ConditionedBigram> conditioned_;
  // bigram_[prev][w]
  std::vector<std::vector<double>> bigram_;
  std::unordered_map<std::string, std::vector<double>> lexicon_;
};

// Deterministic in the corpus. Throws Error on an empty corpus.
ToyScorer TrainToyScorer(const std::vector<SentencePair> &corpus,
                         const ToyScorerOptions &options = {});

}  // namespace cnlm

#endif  // CNLM_DECODER_TOY_SCORER_H_
