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
// Distribution of a sum of independent, non-identical Bernoulli variables.

#ifndef CNLM_NGRAM_POISSON_BINOMIAL_H_
#define CNLM_NGRAM_POISSON_BINOMIAL_H_

#include <span>
#include <vector>

namespace cnlm {

// P(count = k) for k = 0..kmax-1; the last entry holds P(count >= kmax).
// Every p must lie in [0, 1].
std::vector<double> PoissonBinomial(std::span<const double> ps, int kmax = 4);

}  // namespace cnlm

#endif  // CNLM_NGRAM_POISSON_BINOMIAL_H_
