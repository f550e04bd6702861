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
// Mini-batch Adam training of the GRU language model with plateau-based
// learning-rate decay and early stopping on dev perplexity.

#ifndef CNLM_RNN_TRAINER_H_
#define CNLM_RNN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cnlm/rnn/rnn_lm.h"

namespace cnlm {

enum class TrainMode { kNBest, kCn, kCnNBest };

std::string_view TrainModeName(TrainMode mode);
// Accepts "nbest", "cn", "cn+nbest"; throws Error otherwise.
TrainMode ParseTrainMode(std::string_view name);

struct TrainConfig {
  int hidden = kDefaultHidden;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double lr_factor = 0.1;
  int lr_patience = 10;
  int early_stop_patience = 15;
  int max_epochs = 200;
  double clip_norm = 0.0;  // 0 disables clipping
  double init_scale = 0.1;
  std::uint64_t seed = 1;
  Pooling pooling = Pooling::kWeightedMean;
  TrainMode mode = TrainMode::kCn;

  // Throws Error naming the first out-of-range field.
  void Validate() const;
};

struct TrainData {
  std::vector<RnnSequence> nbest;  // one-hot chains of N-best hypotheses
  std::vector<RnnSequence> cn;     // confusion networks
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean KL per target step
  double dev_ppl = 0.0;
  double learning_rate = 0.0;
  bool best = false;
};

// "epoch=<e> train_loss=<6dp> dev_ppl=<4dp> lr=<8dp> best=<0|1>"
std::string FormatEpochRecord(const EpochRecord &record);

struct TrainResult {
  RnnModel model;  // parameters of the best dev epoch
  std::vector<EpochRecord> log;
  int best_epoch = 0;
};

// Trains on the streams selected by `config.mode`. In cn+nbest mode the two
// streams alternate batch by batch, starting with CN batches; an epoch ends
// when the longer stream has been consumed once, the shorter one cycling.
// `on_epoch`, when set, sees every record as it is produced.
TrainResult TrainRnn(const TrainConfig &config, const Vocabulary &vocab,
                     const TrainData &data, std::span<const Sentence> dev,
                     const std::function<void(const EpochRecord &)> &on_epoch = {});

}  // namespace cnlm

#endif  // CNLM_RNN_TRAINER_H_
