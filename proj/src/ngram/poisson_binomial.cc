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

#include "cnlm/ngram/poisson_binomial.h"

#include <algorithm>

#include "cnlm/core/error.h"

namespace cnlm {

std::vector<double> PoissonBinomial(std::span<const double> ps, int kmax) {
  if (kmax < 1) throw Error("kmax must be >= 1");
  const auto top = static_cast<std::size_t>(kmax);
  std::vector<double> dist(top + 1, 0.0);
  dist[0] = 1.0;
  std::size_t reach = 0;  // highest bucket with mass
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("probability outside [0, 1]");
    const double q = 1.0 - p;
    if (reach < top) ++reach;
    // Bucket `top` absorbs: once at kmax the count stays there.
    if (reach == top) dist[top] += dist[top - 1] * p;
    for (std::size_t k = std::min(reach, top - 1); k > 0; --k) {
      dist[k] = dist[k] * q + dist[k - 1] * p;
    }
    dist[0] *= q;
  }
  return dist;
}

}  // namespace cnlm
