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

#include "cnlm/rnn/rnn_lm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cnlm/core/error.h"

namespace cnlm {
namespace {

constexpr double kSumTolerance = 1e-6;

template <typename M>
M Sigmoid(const M &a) {
  return (1 + (-a.array()).exp()).inverse().matrix();
}

SparseDist Normalized(SparseDist d) {
  const double total = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
  if (!(total > 0.0)) throw Error("bin without probability mass");
  for (double &p : d.probs) p /= total;
  return d;
}

void CheckDist(const SparseDist &d, std::size_t vocab_size) {
  if (d.ids.empty() || d.ids.size() != d.probs.size()) {
    throw Error("malformed sequence step");
  }
  for (std::size_t i = 0; i < d.ids.size(); ++i) {
    if (d.ids[i] < 0 || static_cast<std::size_t>(d.ids[i]) >= vocab_size) {
      throw Error("token id outside the model vocabulary");
    }
    if (!(d.probs[i] >= 0.0) || !std::isfinite(d.probs[i])) {
      throw NumericError("invalid arc weight");
    }
  }
}

}  // namespace

std::string_view PoolingName(Pooling pooling) {
  switch (pooling) {
    case Pooling::kWeightedMean:
      return "weighted-mean";
    case Pooling::kMean:
      return "mean";
    case Pooling::kMax:
      return "max";
  }
  return "?";
}

Pooling ParsePooling(std::string_view name) {
  if (name == "weighted-mean") return Pooling::kWeightedMean;
  if (name == "mean") return Pooling::kMean;
  if (name == "max") return Pooling::kMax;
  throw Error("unknown pooling '" + std::string(name) + "'");
}

RnnSequence SequenceFromText(const Sentence &tokens, const Vocabulary &vocab) {
  RnnSequence seq;
  TokenId prev = Vocabulary::kBosId;
  for (const Token &t : tokens) {
    const TokenId id = vocab.At(t);
    seq.inputs.push_back({{prev}, {1.0}});
    seq.targets.push_back({{id}, {1.0}});
    prev = id;
  }
  seq.inputs.push_back({{prev}, {1.0}});
  seq.targets.push_back({{Vocabulary::kEosId}, {1.0}});
  return seq;
}

RnnSequence SequenceFromConfusionNetwork(const ConfusionNetwork &cn,
                                         const Vocabulary &vocab) {
  RnnSequence seq;
  seq.inputs.push_back({{Vocabulary::kBosId}, {1.0}});
  for (const Bin &bin : cn.bins) {
    if (bin.arcs.empty()) {
      throw Error("empty bin in confusion network '" + cn.source_id + "'");
    }
    SparseDist d;
    for (const Arc &a : bin.arcs) {
      d.ids.push_back(vocab.At(a.token));
      d.probs.push_back(a.score);
    }
    d = Normalized(std::move(d));
    seq.targets.push_back(d);
    seq.inputs.push_back(std::move(d));
  }
  seq.targets.push_back({{Vocabulary::kEosId}, {1.0}});
  return seq;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> GruStep(
    const RnnParams<Scalar> &p,
    const std::type_identity_t<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> &h_prev,
    const std::type_identity_t<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> &x) {
  if (h_prev.size() != p.hidden() || x.size() != p.hidden()) {
    throw Error("GRU input dimension mismatch");
  }
  if (!h_prev.allFinite() || !x.allFinite()) {
    throw NumericError("non-finite GRU input");
  }
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Vec z = Sigmoid<Vec>(p.uz * x + p.wz * h_prev + p.bz);
  const Vec r = Sigmoid<Vec>(p.ur * x + p.wr * h_prev + p.br);
  const Vec c = (p.uh * x + p.wh * r.cwiseProduct(h_prev) + p.bh).array().tanh().matrix();
  return h_prev + z.cwiseProduct(c - h_prev);
}

template Eigen::VectorXf GruStep(const RnnParams<float> &,
                                 const Eigen::VectorXf &,
                                 const Eigen::VectorXf &);
template Eigen::VectorXd GruStep(const RnnParams<double> &,
                                 const Eigen::VectorXd &,
                                 const Eigen::VectorXd &);

double KlLoss(std::span<const double> p, std::span<const double> log_q) {
  if (p.size() != log_q.size()) throw Error("distribution size mismatch");
  double total = 0.0;
  double kl = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < 0.0) throw Error("negative probability");
    total += p[j];
    if (p[j] > 0.0) kl += p[j] * (std::log(p[j]) - log_q[j]);
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error("target distribution does not sum to 1");
  }
  return kl;
}

std::vector<double> KlLogitGradient(std::span<const double> p,
                                    std::span<const double> logits) {
  if (p.size() != logits.size()) throw Error("distribution size mismatch");
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  std::vector<double> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    g[j] = std::exp(logits[j] - m) / z - p[j];
  }
  return g;
}

template <typename Scalar>
RnnBatch<Scalar>::RnnBatch(const RnnParams<Scalar> &params, Pooling pooling)
    : params_(params), pooling_(pooling) {}

template <typename Scalar>
double RnnBatch<Scalar>::Forward(std::span<const RnnSequence *const> batch) {
  const RnnParams<Scalar> &p = params_;
  const Eigen::Index d = p.hidden();
  const std::size_t vocab_size = static_cast<std::size_t>(p.vocab_size());

  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return batch[a]->size() > batch[b]->size();
  });
  order_.clear();
  column_of_.assign(batch.size(), 0);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    order_.push_back(batch[idx[j]]);
    column_of_[idx[j]] = j;
  }
  for (const RnnSequence *s : order_) {
    if (s->inputs.size() != s->targets.size()) throw Error("malformed sequence");
  }
  const std::size_t length = order_.empty() ? 0 : order_.front()->size();

  steps_.assign(length, Step{});
  num_targets_ = 0;
  double loss = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    Step &st = steps_[t];
    while (st.active < static_cast<Eigen::Index>(order_.size()) &&
           order_[static_cast<std::size_t>(st.active)]->size() > t) {
      ++st.active;
    }
    for (Eigen::Index j = 0; j < st.active; ++j) {
      const SparseDist &in = order_[static_cast<std::size_t>(j)]->inputs[t];
      CheckDist(in, vocab_size);
      const double total = std::accumulate(in.probs.begin(), in.probs.end(), 0.0);
      if (!(total > 0.0)) throw NumericError("input bin without mass");
      for (std::size_t i = 0; i < in.ids.size(); ++i) {
        st.arc_ids.push_back(in.ids[i]);
        st.arc_col.push_back(j);
        st.arc_weight.push_back(static_cast<Scalar>(
            pooling_ == Pooling::kWeightedMean ? in.probs[i] / total
                                               : 1.0 / static_cast<double>(in.ids.size())));
      }
    }
    const Eigen::Index arcs = static_cast<Eigen::Index>(st.arc_ids.size());

    st.x.resize(d, arcs);
    st.hp.resize(d, arcs);
    for (Eigen::Index a = 0; a < arcs; ++a) {
      st.x.col(a) = p.embedding.row(st.arc_ids[static_cast<std::size_t>(a)]).transpose();
    }
    Matrix wz_h, wr_h;
    if (t == 0) {
      st.hp.setZero();
      wz_h = Matrix::Zero(d, st.active);
      wr_h = Matrix::Zero(d, st.active);
    } else {
      const auto prev = steps_[t - 1].pooled.leftCols(st.active);
      for (Eigen::Index a = 0; a < arcs; ++a) {
        st.hp.col(a) = prev.col(st.arc_col[static_cast<std::size_t>(a)]);
      }
      wz_h.noalias() = p.wz * prev;
      wr_h.noalias() = p.wr * prev;
    }
    Matrix az = p.uz * st.x;
    Matrix ar = p.ur * st.x;
    for (Eigen::Index a = 0; a < arcs; ++a) {
      const Eigen::Index col = st.arc_col[static_cast<std::size_t>(a)];
      az.col(a) += wz_h.col(col) + p.bz;
      ar.col(a) += wr_h.col(col) + p.br;
    }
    st.z = Sigmoid<Matrix>(az);
    st.r = Sigmoid<Matrix>(ar);
    Matrix ac = p.uh * st.x;
    ac.noalias() += p.wh * st.r.cwiseProduct(st.hp);
    ac.colwise() += p.bh.col(0);
    st.c = ac.array().tanh().matrix();
    st.h = st.hp + st.z.cwiseProduct(st.c - st.hp);

    st.pooled = Matrix::Zero(d, st.active);
    if (pooling_ == Pooling::kMax) {
      st.argmax.setConstant(d, st.active, -1);
      for (Eigen::Index a = 0; a < arcs; ++a) {
        const Eigen::Index col = st.arc_col[static_cast<std::size_t>(a)];
        for (Eigen::Index i = 0; i < d; ++i) {
          if (st.argmax(i, col) < 0 || st.h(i, a) > st.pooled(i, col)) {
            st.pooled(i, col) = st.h(i, a);
            st.argmax(i, col) = a;
          }
        }
      }
    } else {
      for (Eigen::Index a = 0; a < arcs; ++a) {
        st.pooled.col(st.arc_col[static_cast<std::size_t>(a)]) +=
            st.arc_weight[static_cast<std::size_t>(a)] * st.h.col(a);
      }
    }
    if (!st.pooled.allFinite()) throw NumericError("non-finite hidden state");

    st.log_q.noalias() = p.embedding * st.pooled;
    for (Eigen::Index j = 0; j < st.active; ++j) {
      auto col = st.log_q.col(j);
      const Scalar m = col.maxCoeff();
      const Scalar lse = m + std::log((col.array() - m).exp().sum());
      col.array() -= lse;
      const SparseDist &target = order_[static_cast<std::size_t>(j)]->targets[t];
      CheckDist(target, vocab_size);
      for (std::size_t i = 0; i < target.ids.size(); ++i) {
        const double pj = target.probs[i];
        if (pj > 0.0) {
          loss += pj * (std::log(pj) - static_cast<double>(col(target.ids[i])));
        }
      }
      ++num_targets_;
    }
  }
  if (!std::isfinite(loss)) throw NumericError("non-finite loss");
  return loss;
}

template <typename Scalar>
void RnnBatch<Scalar>::Backward(Scalar scale, RnnParams<Scalar> *grad) const {
  const RnnParams<Scalar> &p = params_;
  const Eigen::Index d = p.hidden();
  Matrix carry;  // gradient flowing into the pooled state of step t
  for (std::size_t t = steps_.size(); t-- > 0;) {
    const Step &st = steps_[t];
    const Eigen::Index arcs = static_cast<Eigen::Index>(st.arc_ids.size());

    Matrix dlogits = st.log_q.array().exp().matrix();
    for (Eigen::Index j = 0; j < st.active; ++j) {
      const SparseDist &target = order_[static_cast<std::size_t>(j)]->targets[t];
      for (std::size_t i = 0; i < target.ids.size(); ++i) {
        dlogits(target.ids[i], j) -= static_cast<Scalar>(target.probs[i]);
      }
    }
    dlogits *= scale;
    grad->embedding.noalias() += dlogits * st.pooled.transpose();
    Matrix dpooled = p.embedding.transpose() * dlogits;
    if (carry.cols() > 0) dpooled.leftCols(carry.cols()) += carry;

    Matrix dh(d, arcs);
    if (pooling_ == Pooling::kMax) {
      dh.setZero();
      for (Eigen::Index j = 0; j < st.active; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) dh(i, st.argmax(i, j)) = dpooled(i, j);
      }
    } else {
      for (Eigen::Index a = 0; a < arcs; ++a) {
        dh.col(a) = st.arc_weight[static_cast<std::size_t>(a)] *
                    dpooled.col(st.arc_col[static_cast<std::size_t>(a)]);
      }
    }

    const auto one = Matrix::Ones(d, arcs).array();
    const Matrix daz = (dh.array() * (st.c - st.hp).array() * st.z.array() *
                        (one - st.z.array())).matrix();
    const Matrix dac = (dh.array() * st.z.array() *
                        (one - st.c.array().square())).matrix();
    const Matrix rh = st.r.cwiseProduct(st.hp);
    const Matrix drh = p.wh.transpose() * dac;
    const Matrix dar = (drh.array() * st.hp.array() * st.r.array() *
                        (one - st.r.array())).matrix();
    const Matrix dhp = (dh.array() * (one - st.z.array()) +
                        drh.array() * st.r.array()).matrix();

    grad->uz.noalias() += daz * st.x.transpose();
    grad->ur.noalias() += dar * st.x.transpose();
    grad->uh.noalias() += dac * st.x.transpose();
    grad->wh.noalias() += dac * rh.transpose();
    grad->bh += dac.rowwise().sum();

    // The recurrent gate inputs only depend on the owning sequence.
    Matrix sz = Matrix::Zero(d, st.active);
    Matrix sr = Matrix::Zero(d, st.active);
    Matrix shp = Matrix::Zero(d, st.active);
    for (Eigen::Index a = 0; a < arcs; ++a) {
      const Eigen::Index col = st.arc_col[static_cast<std::size_t>(a)];
      sz.col(col) += daz.col(a);
      sr.col(col) += dar.col(a);
      shp.col(col) += dhp.col(a);
    }
    grad->bz += sz.rowwise().sum();
    grad->br += sr.rowwise().sum();
    if (t > 0) {
      const auto prev = steps_[t - 1].pooled.leftCols(st.active);
      grad->wz.noalias() += sz * prev.transpose();
      grad->wr.noalias() += sr * prev.transpose();
      carry = shp;
      carry.noalias() += p.wz.transpose() * sz;
      carry.noalias() += p.wr.transpose() * sr;
    }

    Matrix dx = p.uz.transpose() * daz;
    dx.noalias() += p.ur.transpose() * dar;
    dx.noalias() += p.uh.transpose() * dac;
    for (Eigen::Index a = 0; a < arcs; ++a) {
      grad->embedding.row(st.arc_ids[static_cast<std::size_t>(a)]) +=
          dx.col(a).transpose();
    }
  }
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> RnnBatch<Scalar>::State(
    std::size_t b, std::size_t t) const {
  return steps_.at(t).pooled.col(static_cast<Eigen::Index>(column_of_.at(b)));
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> RnnBatch<Scalar>::LogProbs(
    std::size_t b, std::size_t t) const {
  return steps_.at(t).log_q.col(static_cast<Eigen::Index>(column_of_.at(b)));
}

template class RnnBatch<float>;
template class RnnBatch<double>;

RnnForwardResult ForwardSequence(const RnnParams<double> &params,
                                 const RnnSequence &sequence, Pooling pooling) {
  RnnBatch<double> batch(params, pooling);
  const RnnSequence *ptr = &sequence;
  RnnForwardResult out;
  out.loss = batch.Forward(std::span<const RnnSequence *const>(&ptr, 1));
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    out.states.push_back(batch.State(0, t));
    out.log_probs.push_back(batch.LogProbs(0, t));
  }
  return out;
}

double RnnLossAndGradient(const RnnParams<double> &params,
                          std::span<const RnnSequence> batch, Pooling pooling,
                          RnnParams<double> *grad) {
  std::vector<const RnnSequence *> ptrs;
  for (const RnnSequence &s : batch) ptrs.push_back(&s);
  RnnBatch<double> engine(params, pooling);
  const double loss = engine.Forward(ptrs);
  if (grad != nullptr) {
    *grad = RnnParams<double>::Zeros(params.vocab_size(), params.hidden());
    engine.Backward(1.0, grad);
  }
  return loss;
}

PerplexityResult RnnPerplexity(const RnnParams<double> &params,
                               const Vocabulary &vocab,
                               std::span<const Sentence> corpus) {
  if (vocab.size() != static_cast<std::size_t>(params.vocab_size())) {
    throw Error("vocabulary does not match the model");
  }
  constexpr std::size_t kEvalBatch = 64;
  double nll = 0.0;
  std::size_t tokens = 0;
  for (std::size_t begin = 0; begin < corpus.size(); begin += kEvalBatch) {
    const std::size_t end = std::min(corpus.size(), begin + kEvalBatch);
    std::vector<RnnSequence> seqs;
    for (std::size_t i = begin; i < end; ++i) {
      seqs.push_back(SequenceFromText(corpus[i], vocab));
      tokens += seqs.back().size();
    }
    // One-hot targets make the KL loss the negative log-likelihood.
    nll += RnnLossAndGradient(params, seqs, Pooling::kWeightedMean, nullptr);
  }
  return MakePerplexity(nll, tokens, corpus.size());
}

PerplexityResult RnnPerplexity(const RnnModel &model,
                               std::span<const Sentence> corpus) {
  return RnnPerplexity(model.params.Cast<double>(), model.vocab, corpus);
}

}  // namespace cnlm
