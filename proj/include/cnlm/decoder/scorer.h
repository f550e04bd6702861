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

#ifndef CNLM_DECODER_SCORER_H_
#define CNLM_DECODER_SCORER_H_

#include <span>
#include <vector>

#include "cnlm/core/token.h"
#include "cnlm/core/vocabulary.h"

namespace cnlm {

// Per-source state computed once before decoding. `cache` is owned by the
// scorer that produced it.
struct SourceContext {
  Sentence tokens;
  std::vector<double> cache;
};

// Conditional next-token model P(w_t | w_1..w_{t-1}, source).
//
// Implementations must be safe to call concurrently through const methods.
class Scorer {
 public:
  virtual ~Scorer() = default;

  // Target vocabulary. Its </s> entry ends a hypothesis.
  virtual const Vocabulary &vocab() const = 0;

  virtual SourceContext Prepare(const Sentence &source) const {
    return SourceContext{source, {}};
  }

  // Natural-log probabilities for every vocabulary id; the vector must have
  // vocab().size() entries and log-sum-exp to 0. -inf marks impossible
  // continuations. `prefix` excludes the <pad> root.
  virtual std::vector<double> NextLogProbs(
      const SourceContext &source, std::span<const TokenId> prefix) const = 0;
};

}  // namespace cnlm

#endif  // CNLM_DECODER_SCORER_H_
