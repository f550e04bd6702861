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

#include "cnlm/cnbuild/confusion_network.h"

#include <cmath>
#include <set>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"
#include "cnlm/core/text_io.h"

namespace cnlm {

double Bin::Total() const {
  double total = 0.0;
  for (const Arc &a : arcs) total += a.score;
  return total;
}

double Bin::ScoreOf(std::string_view token) const {
  double score = 0.0;
  for (const Arc &a : arcs) {
    if (a.token == token) score += a.score;
  }
  return score;
}

bool Bin::HasDelete() const {
  for (const Arc &a : arcs) {
    if (a.token == kDelete) return true;
  }
  return false;
}

bool Bin::OnlyDeletes() const {
  for (const Arc &a : arcs) {
    if (a.token != kDelete) return false;
  }
  return true;
}

ConfusionNetwork ChainNetwork(const std::string &source_id,
                              const Sentence &tokens) {
  ConfusionNetwork cn;
  cn.source_id = source_id;
  for (const Token &t : tokens) cn.bins.push_back(Bin{{Arc{t, 1.0}}});
  return cn;
}

std::string SerializeConfusionNetwork(const ConfusionNetwork &cn) {
  std::string out = "name " + cn.source_id + "\n";
  out += "numaligns " + std::to_string(cn.bins.size()) + "\n";
  for (std::size_t k = 0; k < cn.bins.size(); ++k) {
    out += "align " + std::to_string(k);
    for (const Arc &a : cn.bins[k].arcs) {
      out += ' ';
      out += a.token;
      out += ' ';
      out += FormatFixed(a.score, kScoreDecimals);
    }
    out += '\n';
  }
  return out;
}

std::string SerializeConfusionNetworks(
    const std::vector<ConfusionNetwork> &cns) {
  std::string out;
  for (const ConfusionNetwork &cn : cns) out += SerializeConfusionNetwork(cn);
  return out;
}

std::vector<ConfusionNetwork> ParseConfusionNetworks(std::string_view text) {
  std::vector<ConfusionNetwork> cns;
  std::size_t expected_bins = 0;
  bool have_count = false;
  std::size_t lineno = 0;

  const auto finish = [&](std::size_t line) {
    if (cns.empty()) return;
    if (!have_count) throw ParseError("missing numaligns", line);
    if (cns.back().bins.size() != expected_bins) {
      throw ParseError("expected " + std::to_string(expected_bins) +
                           " align lines, found " +
                           std::to_string(cns.back().bins.size()),
                       line);
    }
  };

  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    const Sentence fields = SplitTokens(line);
    if (fields.empty()) continue;
    const Token &keyword = fields[0];
    if (keyword == "name") {
      finish(lineno);
      if (fields.size() != 2) throw ParseError("malformed name line", lineno);
      cns.emplace_back();
      cns.back().source_id = fields[1];
      have_count = false;
    } else if (keyword == "numaligns") {
      if (cns.empty()) throw ParseError("numaligns before name", lineno);
      if (have_count) throw ParseError("duplicate numaligns", lineno);
      const auto k = fields.size() == 2 ? ParseInt(fields[1]) : std::nullopt;
      if (!k || *k < 0) throw ParseError("malformed numaligns line", lineno);
      expected_bins = static_cast<std::size_t>(*k);
      have_count = true;
    } else if (keyword == "align") {
      if (cns.empty() || !have_count) {
        throw ParseError("align line before header", lineno);
      }
      ConfusionNetwork &cn = cns.back();
      const auto index = fields.size() >= 2 ? ParseInt(fields[1]) : std::nullopt;
      if (!index || static_cast<std::size_t>(*index) != cn.bins.size()) {
        throw ParseError("align index out of sequence", lineno);
      }
      if (cn.bins.size() >= expected_bins) {
        throw ParseError("more align lines than numaligns", lineno);
      }
      if (fields.size() % 2 != 0) {
        throw ParseError("align line needs token/score pairs", lineno);
      }
      Bin bin;
      for (std::size_t i = 2; i + 1 < fields.size(); i += 2) {
        const auto score = ParseDouble(fields[i + 1]);
        if (!score || !std::isfinite(*score)) {
          throw ParseError("bad score '" + fields[i + 1] + "'", lineno);
        }
        bin.arcs.push_back(Arc{fields[i], *score});
      }
      cn.bins.push_back(std::move(bin));
    } else {
      throw ParseError("unknown keyword '" + keyword + "'", lineno);
    }
  }
  finish(lineno);
  return cns;
}

ConfusionNetwork ParseConfusionNetwork(std::string_view text) {
  std::vector<ConfusionNetwork> cns = ParseConfusionNetworks(text);
  if (cns.size() != 1) {
    throw ParseError("expected exactly one confusion network, found " +
                         std::to_string(cns.size()),
                     0);
  }
  return std::move(cns.front());
}

std::vector<std::string> CheckConfusionNetwork(const ConfusionNetwork &cn,
                                               const ValidationOptions &options) {
  std::vector<std::string> problems;
  for (std::size_t k = 0; k < cn.bins.size(); ++k) {
    const Bin &bin = cn.bins[k];
    const std::string where = "bin " + std::to_string(k) + ": ";
    if (bin.arcs.empty()) {
      problems.push_back(where + "empty");
      continue;
    }
    if (bin.OnlyDeletes()) problems.push_back(where + "only *DELETE* arcs");
    if (options.max_arcs > 0 &&
        bin.arcs.size() > static_cast<std::size_t>(options.max_arcs)) {
      problems.push_back(where + std::to_string(bin.arcs.size()) + " arcs");
    }
    std::set<Token> seen;
    int deletes = 0;
    for (std::size_t i = 0; i < bin.arcs.size(); ++i) {
      const Arc &a = bin.arcs[i];
      if (a.token.empty() || SplitTokens(a.token).size() != 1) {
        problems.push_back(where + "malformed token");
      }
      if (!seen.insert(a.token).second) {
        problems.push_back(where + "duplicate token '" + a.token + "'");
      }
      if (a.token == kDelete) ++deletes;
      if (!(a.score >= 0.0 && a.score <= 1.0 + options.sum_tolerance)) {
        problems.push_back(where + "score out of [0,1]");
      }
      if (i > 0 && a.score > bin.arcs[i - 1].score) {
        problems.push_back(where + "arcs not sorted by score");
      }
    }
    if (deletes > 1) problems.push_back(where + "several *DELETE* arcs");
    if (std::abs(bin.Total() - 1.0) > options.sum_tolerance) {
      problems.push_back(where + "scores sum to " +
                         FormatFixed(bin.Total(), 12));
    }
  }
  return problems;
}

void ValidateConfusionNetwork(const ConfusionNetwork &cn,
                              const ValidationOptions &options) {
  const std::vector<std::string> problems = CheckConfusionNetwork(cn, options);
  if (!problems.empty()) {
    throw ValidationError(cn.source_id + ": " + problems.front());
  }
}

}  // namespace cnlm
