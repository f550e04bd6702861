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

#ifndef CNLM_CORE_PERPLEXITY_H_
#define CNLM_CORE_PERPLEXITY_H_

#include <cstddef>

namespace cnlm {

// Perplexity over a test corpus. num_tokens counts every word plus one </s>
// per sentence; <s> is never counted.
struct PerplexityResult {
  double ppl = 0.0;
  double neg_log_prob = 0.0;  // natural log, summed
  std::size_t num_tokens = 0;
  std::size_t num_sentences = 0;
};

// exp(neg_log_prob / num_tokens); throws Error for num_tokens == 0.
PerplexityResult MakePerplexity(double neg_log_prob, std::size_t num_tokens,
                                std::size_t num_sentences);

}  // namespace cnlm

#endif  // CNLM_CORE_PERPLEXITY_H_
