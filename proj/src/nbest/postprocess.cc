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

#include "cnlm/nbest/postprocess.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cnlm/core/error.h"

namespace cnlm {
namespace {

double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// Length of the shortest block that the sentence ends with twice in a row,
// or 0 if there is none.
std::size_t TrailingPeriod(const Sentence &tokens) {
  const std::size_t n = tokens.size();
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    if (std::equal(tokens.end() - static_cast<std::ptrdiff_t>(p), tokens.end(),
                   tokens.end() - static_cast<std::ptrdiff_t>(2 * p))) {
      return p;
    }
  }
  return 0;
}

}  // namespace

Sentence PruneAtEos(const Sentence &tokens) {
  auto it = std::find_if(tokens.begin(), tokens.end(), [](const Token &t) {
    return t == kEos || t == kPad;
  });
  return Sentence(tokens.begin(), it);
}

double LengthSlack(std::size_t source_len) {
  return std::max(3.0, 1.0 + static_cast<double>(source_len) / 5.0);
}

Sentence PruneRepetition(const Sentence &tokens, std::size_t source_len) {
  const double slack = LengthSlack(source_len);
  const double source = static_cast<double>(source_len);
  const auto limit = static_cast<std::size_t>(std::floor(source + slack));
  Sentence out = tokens;
  // Truncation can expose a fresh trailing repeat, so iterate to a fixed
  // point; every round shortens the sentence.
  while (static_cast<double>(out.size()) - source >= slack) {
    const std::size_t before = out.size();
    const std::size_t period = TrailingPeriod(out);
    if (period > 0) {
      while (out.size() >= 2 * period &&
             std::equal(out.end() - static_cast<std::ptrdiff_t>(period),
                        out.end(),
                        out.end() - static_cast<std::ptrdiff_t>(2 * period))) {
        out.resize(out.size() - period);
      }
    }
    if (out.size() > limit) out.resize(limit);
    if (out.size() == before) break;
  }
  return out;
}

NBestList PostprocessNBest(const NBestList &raw) {
  std::map<Sentence, double> merged;
  for (const Hypothesis &h : raw.hypotheses) {
    Sentence tokens = PruneAtEos(StripPunctuation(h.tokens));
    if (!raw.source.empty()) tokens = PruneRepetition(tokens, raw.source.size());
    if (tokens.empty()) continue;
    auto [it, inserted] = merged.emplace(std::move(tokens), h.loglik);
    if (!inserted) it->second = LogAdd(it->second, h.loglik);
  }
  if (merged.empty()) {
    throw Error("no usable translation for source '" + raw.source_id + "'");
  }
  NBestList out;
  out.source_id = raw.source_id;
  out.source = raw.source;
  for (auto &[tokens, loglik] : merged) out.hypotheses.push_back({tokens, loglik});
  SortHypotheses(&out.hypotheses);
  return out;
}

std::vector<double> NBestPosteriors(std::span<const double> logliks,
                                    double scale) {
  if (logliks.empty()) throw Error("posteriors of an empty N-best list");
  if (!(scale > 0.0)) throw Error("posterior scale must be > 0");
  double max = -std::numeric_limits<double>::infinity();
  for (double ll : logliks) {
    if (!std::isfinite(ll)) throw NumericError("non-finite log-likelihood");
    max = std::max(max, scale * ll);
  }
  std::vector<double> post(logliks.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logliks.size(); ++i) {
    post[i] = std::exp(scale * logliks[i] - max);
    total += post[i];
  }
  for (double &p : post) p /= total;
  return post;
}

NBestList TruncateNBest(const NBestList &list, std::size_t n) {
  if (n == 0) throw Error("N must be >= 1");
  NBestList out = list;
  if (out.hypotheses.size() > n) out.hypotheses.resize(n);
  out.posteriors.clear();
  return out;
}

}  // namespace cnlm
