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
// Word confusion networks ("sausages") and their text format:
//
//   name <source_id>
//   numaligns <K>
//   align 0 <token> <score> <token> <score> ...
//   ...
//   align K-1 ...
//
// Scores are printed with six decimals. A file may hold several networks
// back to back.

#ifndef CNLM_CNBUILD_CONFUSION_NETWORK_H_
#define CNLM_CNBUILD_CONFUSION_NETWORK_H_

#include <string>
#include <string_view>
#include <vector>

#include "cnlm/core/token.h"

namespace cnlm {

struct Arc {
  Token token;
  double score = 0.0;

  friend bool operator==(const Arc &, const Arc &) = default;
};

struct Bin {
  std::vector<Arc> arcs;

  double Total() const;
  // Score of `token` in this bin, 0 if absent.
  double ScoreOf(std::string_view token) const;
  bool HasDelete() const;
  bool OnlyDeletes() const;
};

struct ConfusionNetwork {
  std::string source_id;
  std::vector<Bin> bins;
};

// Chain network with one arc of score 1 per token.
ConfusionNetwork ChainNetwork(const std::string &source_id,
                              const Sentence &tokens);

inline constexpr int kScoreDecimals = 6;

std::string SerializeConfusionNetwork(const ConfusionNetwork &cn);
std::string SerializeConfusionNetworks(const std::vector<ConfusionNetwork> &cns);

// Throws ParseError carrying the offending line number.
ConfusionNetwork ParseConfusionNetwork(std::string_view text);
std::vector<ConfusionNetwork> ParseConfusionNetworks(std::string_view text);

struct ValidationOptions {
  int max_arcs = 5;              // 0 disables the check
  double sum_tolerance = 1e-9;   // loosen for networks read back from text
};

// Returns one message per violated invariant; empty when the network is a
// valid finalized confusion network.
std::vector<std::string> CheckConfusionNetwork(
    const ConfusionNetwork &cn, const ValidationOptions &options = {});

// Throws ValidationError with the first violation.
void ValidateConfusionNetwork(const ConfusionNetwork &cn,
                              const ValidationOptions &options = {});

}  // namespace cnlm

#endif  // CNLM_CNBUILD_CONFUSION_NETWORK_H_
