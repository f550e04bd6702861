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
// Seeded generator of a small German-to-English task-dialogue corpus
// (pizza, coffee, cinema, restaurant, car repair, rides). Each utterance
// type has one German rendering and several English paraphrases with
// skewed frequencies. The train, dev and test references use all
// paraphrases. A separate `mt` split, the training data of the stand-in
// translation system, only uses the first two, so translations of the
// train sources miss part of the reference phrasing. A few slot values only
// ever appear in dev and test.

#ifndef CNLM_PIPELINE_SYNTHETIC_H_
#define CNLM_PIPELINE_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "cnlm/decoder/toy_scorer.h"

namespace cnlm {

struct SyntheticOptions {
  int train_size = 2000;
  int dev_size = 200;
  int test_size = 200;
  int mt_size = 2000;
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  std::vector<SentencePair> train, dev, test;
  std::vector<SentencePair> mt;  // translation system training pairs
};

// Deterministic per options. Tokens keep case and punctuation.
SyntheticCorpus GenerateSynthetic(const SyntheticOptions &options);

// Every English word form the templates can emit, before normalization.
std::vector<Token> SyntheticTargetInventory();

}  // namespace cnlm

#endif  // CNLM_PIPELINE_SYNTHETIC_H_
