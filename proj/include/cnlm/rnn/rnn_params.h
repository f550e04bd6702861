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
// Parameters of the GRU language model. The embedding matrix doubles as the
// output projection, so logits are `embedding * h`.

#ifndef CNLM_RNN_RNN_PARAMS_H_
#define CNLM_RNN_RNN_PARAMS_H_

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace cnlm {

inline constexpr int kDefaultHidden = 64;

template <typename Scalar>
struct RnnParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix embedding;   // vocab x hidden
  Matrix uz, ur, uh;  // hidden x hidden, applied to the input embedding
  Matrix wz, wr, wh;  // hidden x hidden, applied to the previous state
  Matrix bz, br, bh;  // hidden x 1

  static constexpr int kNumTensors = 10;
  static constexpr std::array<const char *, kNumTensors> kNames = {
      "embedding", "u_z", "u_r", "u_h", "w_z", "w_r", "w_h", "b_z", "b_r", "b_h"};

  static RnnParams Zeros(int vocab_size, int hidden);
  // Uniform in [-scale, scale] from a generator seeded with `seed`.
  static RnnParams Random(int vocab_size, int hidden, std::uint64_t seed,
                          double scale = 0.1);

  int vocab_size() const { return static_cast<int>(embedding.rows()); }
  int hidden() const { return static_cast<int>(embedding.cols()); }

  std::array<Matrix *, kNumTensors> tensors() {
    return {&embedding, &uz, &ur, &uh, &wz, &wr, &wh, &bz, &br, &bh};
  }
  std::array<const Matrix *, kNumTensors> tensors() const {
    return {&embedding, &uz, &ur, &uh, &wz, &wr, &wh, &bz, &br, &bh};
  }

  template <typename Other>
  RnnParams<Other> Cast() const {
    RnnParams<Other> out;
    auto dst = out.tensors();
    auto src = tensors();
    for (int i = 0; i < kNumTensors; ++i) *dst[i] = src[i]->template cast<Other>();
    return out;
  }

  void SetZero() {
    for (Matrix *m : tensors()) m->setZero();
  }
  bool AllFinite() const {
    for (const Matrix *m : tensors()) {
      if (!m->allFinite()) return false;
    }
    return true;
  }
};

extern template struct RnnParams<float>;
extern template struct RnnParams<double>;

}  // namespace cnlm

#endif  // CNLM_RNN_RNN_PARAMS_H_
