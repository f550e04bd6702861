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

#include "cnlm/rnn/rnn_params.h"

#include <random>

#include "cnlm/core/error.h"

namespace cnlm {

template <typename Scalar>
RnnParams<Scalar> RnnParams<Scalar>::Zeros(int vocab_size, int hidden) {
  if (vocab_size < 1 || hidden < 1) throw Error("model dimensions must be positive");
  RnnParams p;
  p.embedding = Matrix::Zero(vocab_size, hidden);
  for (Matrix *m : {&p.uz, &p.ur, &p.uh, &p.wz, &p.wr, &p.wh}) {
    *m = Matrix::Zero(hidden, hidden);
  }
  for (Matrix *m : {&p.bz, &p.br, &p.bh}) *m = Matrix::Zero(hidden, 1);
  return p;
}

template <typename Scalar>
RnnParams<Scalar> RnnParams<Scalar>::Random(int vocab_size, int hidden,
                                            std::uint64_t seed, double scale) {
  RnnParams p = Zeros(vocab_size, hidden);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  // Column-major fill order is part of the seed contract.
  for (Matrix *m : p.tensors()) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = static_cast<Scalar>(u(rng));
  }
  return p;
}

template struct RnnParams<float>;
template struct RnnParams<double>;

}  // namespace cnlm
