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
// GRU language model over word sequences or confusion networks. Text is
// handled as a chain network with one-hot targets, so both share one
// batched forward/backward implementation. At every step the input is a set
// of weighted arcs; each arc runs one GRU step from the previous pooled
// state and the resulting states are pooled into the next one, from which
// the following bin is predicted.

#ifndef CNLM_RNN_RNN_LM_H_
#define CNLM_RNN_RNN_LM_H_

#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/core/perplexity.h"
#include "cnlm/core/vocabulary.h"
#include "cnlm/rnn/rnn_params.h"

namespace cnlm {

enum class Pooling { kWeightedMean, kMean, kMax };

std::string_view PoolingName(Pooling pooling);
// Accepts "weighted-mean", "mean", "max"; throws Error otherwise.
Pooling ParsePooling(std::string_view name);

// Sparse distribution over vocabulary ids.
struct SparseDist {
  std::vector<TokenId> ids;
  std::vector<double> probs;
};

// inputs[t] feeds step t, whose prediction is scored against targets[t].
struct RnnSequence {
  std::vector<SparseDist> inputs;
  std::vector<SparseDist> targets;
  std::size_t size() const { return inputs.size(); }
};

// <s> w1 .. wn -> w1 .. wn </s>. Tokens must be in `vocab`.
RnnSequence SequenceFromText(const Sentence &tokens, const Vocabulary &vocab);

// {<s>} B1 .. BK -> B1 .. BK {</s>}, with *DELETE* as an ordinary token.
// Throws Error for an empty bin.
RnnSequence SequenceFromConfusionNetwork(const ConfusionNetwork &cn,
                                         const Vocabulary &vocab);

// One GRU step:
//   z = sig(Uz x + Wz h + bz), r = sig(Ur x + Wr h + br),
//   c = tanh(Uh x + Wh (r * h) + bh), h' = (1 - z) * h + z * c.
// Throws NumericError on non-finite input.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> GruStep(
    const RnnParams<Scalar> &params,
    const std::type_identity_t<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> &h_prev,
    const std::type_identity_t<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> &x);

// KL(p || q) with q = exp(log_q). p is given densely; throws Error when it
// does not sum to one.
double KlLoss(std::span<const double> p, std::span<const double> log_q);

// d KL / d logits = softmax(logits) - p.
std::vector<double> KlLogitGradient(std::span<const double> p,
                                    std::span<const double> logits);

// Batched forward and backward pass. Sequences may have different lengths.
template <typename Scalar>
class RnnBatch {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  RnnBatch(const RnnParams<Scalar> &params, Pooling pooling);

  // Returns the summed KL loss over all target steps of `batch` and keeps
  // the activations for Backward.
  double Forward(std::span<const RnnSequence *const> batch);

  // Adds scale * d(loss)/d(params) of the last Forward to `grad`.
  void Backward(Scalar scale, RnnParams<Scalar> *grad) const;

  std::size_t num_targets() const { return num_targets_; }

  // Pooled state and log-probabilities of batch entry `b` at step `t`.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> State(std::size_t b, std::size_t t) const;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> LogProbs(std::size_t b, std::size_t t) const;

 private:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Step {
    Eigen::Index active = 0;            // leading columns in use
    std::vector<TokenId> arc_ids;
    std::vector<Eigen::Index> arc_col;  // owning column
    std::vector<Scalar> arc_weight;     // pooling weight, unused for max
    Matrix x, hp, z, r, c, h;           // hidden x arcs
    Matrix pooled;                      // hidden x active
    Matrix log_q;                       // vocab x active
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> argmax;
  };

  const RnnParams<Scalar> &params_;
  Pooling pooling_;
  std::vector<const RnnSequence *> order_;  // by decreasing length
  std::vector<std::size_t> column_of_;      // batch index -> column
  std::vector<Step> steps_;
  std::size_t num_targets_ = 0;
};

extern template class RnnBatch<float>;
extern template class RnnBatch<double>;

// Single-sequence convenience wrapper for tests and inspection.
struct RnnForwardResult {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> log_probs;
  double loss = 0.0;
};
RnnForwardResult ForwardSequence(const RnnParams<double> &params,
                                 const RnnSequence &sequence, Pooling pooling);

// Loss and gradient of a batch, in double precision, for gradient checks.
double RnnLossAndGradient(const RnnParams<double> &params,
                          std::span<const RnnSequence> batch, Pooling pooling,
                          RnnParams<double> *grad);

struct RnnModel {
  Vocabulary vocab;
  RnnParams<float> params;
};

// Perplexity of tokenized, OOV-mapped sentences, evaluated in double
// precision. Token counting matches the n-gram evaluator.
PerplexityResult RnnPerplexity(const RnnModel &model,
                               std::span<const Sentence> corpus);
PerplexityResult RnnPerplexity(const RnnParams<double> &params,
                               const Vocabulary &vocab,
                               std::span<const Sentence> corpus);

}  // namespace cnlm

#endif  // CNLM_RNN_RNN_LM_H_
