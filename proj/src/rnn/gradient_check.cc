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

#include "cnlm/rnn/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace cnlm {

GradientCheckResult CheckGradients(const RnnParams<double> &params,
                                   const LossFn &loss, double eps) {
  RnnParams<double> analytic;
  loss(params, &analytic);
  RnnParams<double> probe = params;
  GradientCheckResult result;
  auto tensors = probe.tensors();
  const auto grads = std::as_const(analytic).tensors();
  for (int t = 0; t < RnnParams<double>::kNumTensors; ++t) {
    auto &m = *tensors[t];
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double orig = m.data()[i];
      m.data()[i] = orig + eps;
      const double up = loss(probe, nullptr);
      m.data()[i] = orig - eps;
      const double down = loss(probe, nullptr);
      m.data()[i] = orig;
      const double gn = (up - down) / (2.0 * eps);
      const double ga = grads[t]->data()[i];
      const double rel =
          std::abs(ga - gn) / std::max({std::abs(ga), std::abs(gn), 1e-8});
      result.max_abs_gradient = std::max(result.max_abs_gradient, std::abs(ga));
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_tensor = RnnParams<double>::kNames[t];
        result.worst_index = static_cast<long>(i);
      }
    }
  }
  return result;
}

}  // namespace cnlm
