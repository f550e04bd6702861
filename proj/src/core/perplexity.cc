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

#include "cnlm/core/perplexity.h"

#include <cmath>

#include "cnlm/core/error.h"

namespace cnlm {

PerplexityResult MakePerplexity(double neg_log_prob, std::size_t num_tokens,
                                std::size_t num_sentences) {
  if (num_tokens == 0) throw Error("perplexity of an empty corpus");
  if (!std::isfinite(neg_log_prob)) throw NumericError("non-finite log-probability");
  PerplexityResult r;
  r.neg_log_prob = neg_log_prob;
  r.num_tokens = num_tokens;
  r.num_sentences = num_sentences;
  r.ppl = std::exp(neg_log_prob / static_cast<double>(num_tokens));
  return r;
}

}  // namespace cnlm
