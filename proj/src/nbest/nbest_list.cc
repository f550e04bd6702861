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

#include "cnlm/nbest/nbest_list.h"

#include <algorithm>
#include <cmath>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"
#include "cnlm/core/text_io.h"

namespace cnlm {

void SortHypotheses(std::vector<Hypothesis> *hyps) {
  std::stable_sort(hyps->begin(), hyps->end(),
                   [](const Hypothesis &a, const Hypothesis &b) {
                     if (a.loglik != b.loglik) return a.loglik > b.loglik;
                     return a.tokens < b.tokens;
                   });
}

std::string FormatNBestLists(const std::vector<NBestList> &lists) {
  std::string out;
  for (std::size_t l = 0; l < lists.size(); ++l) {
    if (l > 0) out += '\n';
    const NBestList &list = lists[l];
    for (std::size_t r = 0; r < list.hypotheses.size(); ++r) {
      const Hypothesis &h = list.hypotheses[r];
      out += list.source_id;
      out += '\t';
      out += std::to_string(r + 1);
      out += '\t';
      out += FormatFixed(h.loglik, kLogLikDecimals);
      out += '\t';
      out += JoinTokens(h.tokens);
      out += '\n';
    }
  }
  return out;
}

std::vector<NBestList> ParseNBestLists(std::string_view text) {
  std::vector<NBestList> lists;
  bool in_list = false;
  std::size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (line.empty()) {
      in_list = false;
      continue;
    }
    const auto fields = SplitOn(line, '\t');
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields", lineno);
    }
    if (fields[0].empty()) throw ParseError("empty source id", lineno);
    const auto rank = ParseInt(fields[1]);
    if (!rank || *rank < 1) throw ParseError("bad rank", lineno);
    const auto loglik = ParseDouble(fields[2]);
    if (!loglik || std::isnan(*loglik)) {
      throw ParseError("bad log-likelihood", lineno);
    }
    if (!in_list || lists.back().source_id != fields[0]) {
      lists.emplace_back();
      lists.back().source_id = std::string(fields[0]);
      in_list = true;
    }
    NBestList &list = lists.back();
    if (static_cast<std::size_t>(*rank) != list.hypotheses.size() + 1) {
      throw ParseError("ranks must be consecutive from 1", lineno);
    }
    list.hypotheses.push_back({SplitTokens(fields[3]), *loglik});
  }
  return lists;
}

}  // namespace cnlm
