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

#include "cnlm/rnn/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"

namespace cnlm {
namespace {

using ParamsF = RnnParams<float>;

class Adam {
 public:
  Adam(const ParamsF &shape, const TrainConfig &config)
      : m_(ParamsF::Zeros(shape.vocab_size(), shape.hidden())),
        v_(m_),
        config_(config) {}

  void Step(const ParamsF &grad, double lr, ParamsF *params) {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, t_);
    const double c2 = 1.0 - std::pow(config_.beta2, t_);
    const auto b1 = static_cast<float>(config_.beta1);
    const auto b2 = static_cast<float>(config_.beta2);
    const auto step = static_cast<float>(lr / c1);
    const auto inv_c2 = static_cast<float>(1.0 / c2);
    const auto eps = static_cast<float>(config_.adam_epsilon);
    auto g = grad.tensors();
    auto m = m_.tensors();
    auto v = v_.tensors();
    auto p = params->tensors();
    for (int i = 0; i < ParamsF::kNumTensors; ++i) {
      m[i]->array() = b1 * m[i]->array() + (1.0f - b1) * g[i]->array();
      v[i]->array() = b2 * v[i]->array() + (1.0f - b2) * g[i]->array().square();
      p[i]->array() -= step * m[i]->array() / ((v[i]->array() * inv_c2).sqrt() + eps);
    }
  }

 private:
  ParamsF m_, v_;
  const TrainConfig &config_;
  int t_ = 0;
};

// Shuffled batches of one data stream; reshuffles when exhausted.
class BatchStream {
 public:
  BatchStream(const std::vector<RnnSequence> &data, int batch_size,
              std::mt19937_64 *rng)
      : data_(data), batch_size_(static_cast<std::size_t>(batch_size)), rng_(rng) {
    order_.resize(data.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  }

  std::size_t batches_per_pass() const {
    return (data_.size() + batch_size_ - 1) / batch_size_;
  }

  std::vector<const RnnSequence *> Next() {
    if (pos_ == 0) std::shuffle(order_.begin(), order_.end(), *rng_);
    std::vector<const RnnSequence *> batch;
    const std::size_t end = std::min(order_.size(), pos_ + batch_size_);
    for (std::size_t i = pos_; i < end; ++i) batch.push_back(&data_[order_[i]]);
    pos_ = end == order_.size() ? 0 : end;
    return batch;
  }

 private:
  const std::vector<RnnSequence> &data_;
  std::size_t batch_size_;
  std::mt19937_64 *rng_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view TrainModeName(TrainMode mode) {
  switch (mode) {
    case TrainMode::kNBest:
      return "nbest";
    case TrainMode::kCn:
      return "cn";
    case TrainMode::kCnNBest:
      return "cn+nbest";
  }
  return "?";
}

TrainMode ParseTrainMode(std::string_view name) {
  if (name == "nbest") return TrainMode::kNBest;
  if (name == "cn") return TrainMode::kCn;
  if (name == "cn+nbest") return TrainMode::kCnNBest;
  throw Error("unknown training mode '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw Error(std::string("invalid training option: ") + what);
  };
  require(hidden > 0, "hidden");
  require(batch_size > 0, "batch_size");
  require(learning_rate > 0.0, "learning_rate");
  require(beta1 > 0.0 && beta1 < 1.0, "beta1");
  require(beta2 > 0.0 && beta2 < 1.0, "beta2");
  require(adam_epsilon > 0.0, "adam_epsilon");
  require(lr_factor > 0.0 && lr_factor < 1.0, "lr_factor");
  require(lr_patience > 0, "lr_patience");
  require(early_stop_patience > 0, "early_stop_patience");
  require(max_epochs > 0, "max_epochs");
  require(clip_norm >= 0.0, "clip_norm");
  require(init_scale > 0.0, "init_scale");
}

std::string FormatEpochRecord(const EpochRecord &r) {
  return "epoch=" + std::to_string(r.epoch) +
         " train_loss=" + FormatFixed(r.train_loss, 6) +
         " dev_ppl=" + FormatFixed(r.dev_ppl, 4) +
         " lr=" + FormatFixed(r.learning_rate, 8) +
         " best=" + (r.best ? "1" : "0");
}

TrainResult TrainRnn(const TrainConfig &config, const Vocabulary &vocab,
                     const TrainData &data, std::span<const Sentence> dev,
                     const std::function<void(const EpochRecord &)> &on_epoch) {
  config.Validate();
  const bool use_cn = config.mode != TrainMode::kNBest;
  const bool use_nbest = config.mode != TrainMode::kCn;
  if ((use_cn && data.cn.empty()) || (use_nbest && data.nbest.empty())) {
    throw Error("no training data for mode " + std::string(TrainModeName(config.mode)));
  }
  if (dev.empty()) throw Error("empty dev set");

  const int vocab_size = static_cast<int>(vocab.size());
  std::mt19937_64 rng(config.seed);
  ParamsF params = ParamsF::Random(vocab_size, config.hidden, rng(), config.init_scale);
  ParamsF grad = ParamsF::Zeros(vocab_size, config.hidden);
  Adam adam(params, config);

  std::vector<BatchStream> streams;
  if (use_cn) streams.emplace_back(data.cn, config.batch_size, &rng);
  if (use_nbest) streams.emplace_back(data.nbest, config.batch_size, &rng);
  std::size_t longest = 0;
  for (const BatchStream &s : streams) longest = std::max(longest, s.batches_per_pass());
  const std::size_t batches_per_epoch = longest * streams.size();

  TrainResult result;
  result.model.vocab = vocab;
  result.model.params = params;
  double lr = config.learning_rate;
  double best_ppl = std::numeric_limits<double>::infinity();
  int since_best = 0;
  int plateau = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t targets = 0;
    for (std::size_t b = 0; b < batches_per_epoch; ++b) {
      const std::vector<const RnnSequence *> batch = streams[b % streams.size()].Next();
      RnnBatch<float> engine(params, config.pooling);
      const double loss = engine.Forward(batch);
      loss_sum += loss;
      targets += engine.num_targets();
      grad.SetZero();
      engine.Backward(1.0f / static_cast<float>(engine.num_targets()), &grad);
      if (config.clip_norm > 0.0) {
        double sq = 0.0;
        for (const auto *m : std::as_const(grad).tensors()) sq += m->squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > config.clip_norm) {
          for (auto *m : grad.tensors()) *m *= static_cast<float>(config.clip_norm / norm);
        }
      }
      if (!grad.AllFinite()) throw NumericError("non-finite gradient");
      adam.Step(grad, lr, &params);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(targets);
    record.dev_ppl = RnnPerplexity(params.Cast<double>(), vocab, dev).ppl;
    record.learning_rate = lr;
    if (!std::isfinite(record.train_loss) || !std::isfinite(record.dev_ppl)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch));
    }
    record.best = record.dev_ppl < best_ppl;
    if (record.best) {
      best_ppl = record.dev_ppl;
      result.model.params = params;
      result.best_epoch = epoch;
      since_best = 0;
      plateau = 0;
    } else {
      ++since_best;
      if (++plateau >= config.lr_patience) {
        lr *= config.lr_factor;
        plateau = 0;
      }
    }
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);
    if (since_best >= config.early_stop_patience) break;
  }
  return result;
}

}  // namespace cnlm
