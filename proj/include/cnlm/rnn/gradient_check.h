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
// Central finite-difference check of analytic gradients.

#ifndef CNLM_RNN_GRADIENT_CHECK_H_
#define CNLM_RNN_GRADIENT_CHECK_H_

#include <functional>
#include <string>

#include "cnlm/rnn/rnn_params.h"

namespace cnlm {

// Returns the loss and, when `grad` is non-null, fills it with the gradient.
using LossFn = std::function<double(const RnnParams<double> &, RnnParams<double> *)>;

struct GradientCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  long worst_index = -1;
  double max_abs_gradient = 0.0;
};

// Compares every analytic partial derivative with
// (f(x + eps) - f(x - eps)) / (2 eps); the relative error of one entry is
// |ga - gn| / max(|ga|, |gn|, 1e-8).
GradientCheckResult CheckGradients(const RnnParams<double> &params,
                                   const LossFn &loss, double eps = 1e-4);

}  // namespace cnlm

#endif  // CNLM_RNN_GRADIENT_CHECK_H_
