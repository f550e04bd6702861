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
// N-best lists and their text file format:
//
//   source_id <TAB> rank <TAB> loglik <TAB> tok tok tok ...
//
// one hypothesis per line, lists separated by a blank line.

#ifndef CNLM_NBEST_NBEST_LIST_H_
#define CNLM_NBEST_NBEST_LIST_H_

#include <string>
#include <string_view>
#include <vector>

#include "cnlm/core/token.h"

namespace cnlm {

struct Hypothesis {
  Sentence tokens;
  double loglik = 0.0;  // natural log

  friend bool operator==(const Hypothesis &, const Hypothesis &) = default;
};

struct NBestList {
  std::string source_id;
  Sentence source;
  std::vector<Hypothesis> hypotheses;  // loglik descending
  std::vector<double> posteriors;      // empty until computed

  std::size_t size() const { return hypotheses.size(); }
};

// Stable ordering used everywhere: loglik descending, then token sequence
// ascending so that equal scores resolve deterministically.
void SortHypotheses(std::vector<Hypothesis> *hyps);

// `source` is not part of the file format; callers re-attach it.
std::string FormatNBestLists(const std::vector<NBestList> &lists);
std::vector<NBestList> ParseNBestLists(std::string_view text);

// Log-likelihoods are written with this many decimals.
inline constexpr int kLogLikDecimals = 8;

}  // namespace cnlm

#endif  // CNLM_NBEST_NBEST_LIST_H_
