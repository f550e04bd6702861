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

#include "cnlm/ngram/counts.h"

#include <algorithm>
#include <numeric>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"

namespace cnlm {

FractionalCounts::FractionalCounts(int order) : order_(order) {
  if (order < 1) throw Error("n-gram order must be >= 1");
  by_length_.resize(static_cast<std::size_t>(order));
}

void FractionalCounts::Add(const NGram &gram, double prob) {
  if (gram.empty() || gram.size() > static_cast<std::size_t>(order_)) {
    throw Error("n-gram length out of range");
  }
  if (!(prob > 0.0 && prob <= 1.0)) {
    throw Error("occurrence probability must lie in (0, 1]");
  }
  if (gram.size() == 1 && gram[0] == Vocabulary::kBosId) return;
  by_length_[gram.size() - 1][gram].push_back(prob);
}

void FractionalCounts::Merge(const FractionalCounts &other) {
  if (other.order_ != order_) throw Error("cannot merge counts of different order");
  for (std::size_t n = 0; n < by_length_.size(); ++n) {
    for (const auto &[gram, list] : other.by_length_[n]) {
      OccurrenceList &mine = by_length_[n][gram];
      mine.insert(mine.end(), list.begin(), list.end());
    }
  }
}

const OccurrenceMap &FractionalCounts::grams(int n) const {
  if (n < 1 || n > order_) throw Error("n-gram length out of range");
  return by_length_[static_cast<std::size_t>(n - 1)];
}

double FractionalCounts::ExpectedCount(const NGram &gram) const {
  if (gram.empty() || gram.size() > by_length_.size()) return 0.0;
  const OccurrenceMap &m = by_length_[gram.size() - 1];
  auto it = m.find(gram);
  if (it == m.end()) return 0.0;
  return std::accumulate(it->second.begin(), it->second.end(), 0.0);
}

bool FractionalCounts::empty() const {
  return std::all_of(by_length_.begin(), by_length_.end(),
                     [](const OccurrenceMap &m) { return m.empty(); });
}

std::string FractionalCounts::Dump(const Vocabulary &vocab) const {
  std::string out;
  for (const OccurrenceMap &m : by_length_) {
    for (const auto &[gram, list] : m) {
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i > 0) out += ' ';
        out += vocab.Word(gram[i]);
      }
      out += '\t';
      out += FormatFixed(std::accumulate(list.begin(), list.end(), 0.0), 6);
      out += '\t';
      out += std::to_string(list.size());
      out += '\n';
    }
  }
  return out;
}

FractionalCounts CountText(std::span<const Sentence> corpus,
                           const Vocabulary &vocab, int order) {
  FractionalCounts counts(order);
  std::vector<TokenId> ids;
  for (const Sentence &s : corpus) {
    ids.clear();
    ids.push_back(Vocabulary::kBosId);
    for (const Token &t : s) ids.push_back(vocab.At(t));
    ids.push_back(Vocabulary::kEosId);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      NGram gram;
      for (std::size_t m = 0; m < static_cast<std::size_t>(order) &&
                              i + m < ids.size();
           ++m) {
        gram.push_back(ids[i + m]);
        counts.Add(gram, 1.0);
      }
    }
  }
  return counts;
}

namespace {

struct WindowArc {
  TokenId token;  // kNoToken for *DELETE*
  double score;
};

class CnWindowCounter {
 public:
  CnWindowCounter(std::vector<std::vector<WindowArc>> bins, int order,
                  const CnCountOptions &options)
      : bins_(std::move(bins)), order_(order), options_(options) {}

  void CountFrom(std::size_t start, FractionalCounts *counts) {
    found_.clear();
    for (const WindowArc &a : bins_[start]) {
      if (a.token == kNoToken || a.score < options_.min_prob) continue;
      NGram gram{a.token};
      Extend(start, &gram, a.score, 0);
    }
    for (const auto &[gram, prob] : found_) {
      if (prob >= options_.min_prob && prob > 0.0) {
        counts->Add(gram, std::min(prob, 1.0));
      }
    }
  }

 private:
  // `gram` ends with a token read at bin `pos`.
  void Extend(std::size_t pos, NGram *gram, double prob, int skips) {
    found_[*gram] += prob;
    if (gram->size() == static_cast<std::size_t>(order_)) return;
    Step(pos + 1, gram, prob, skips);
  }

  void Step(std::size_t pos, NGram *gram, double prob, int skips) {
    if (pos >= bins_.size()) return;
    for (const WindowArc &a : bins_[pos]) {
      const double p = prob * a.score;
      if (p < options_.min_prob || p <= 0.0) continue;
      if (a.token == kNoToken) {
        if (options_.max_skip < 0 || skips < options_.max_skip) Step(pos + 1, gram, p, skips + 1);
      } else {
        gram->push_back(a.token);
        Extend(pos, gram, p, 0);
        gram->pop_back();
      }
    }
  }

  std::vector<std::vector<WindowArc>> bins_;
  int order_;
  CnCountOptions options_;
  std::map<NGram, double> found_;
};

}  // namespace

FractionalCounts CountConfusionNetwork(const ConfusionNetwork &cn,
                                       const Vocabulary &vocab, int order,
                                       const CnCountOptions &options) {
  std::vector<std::vector<WindowArc>> bins;
  bins.push_back({{Vocabulary::kBosId, 1.0}});
  for (const Bin &bin : cn.bins) {
    std::vector<WindowArc> arcs;
    for (const Arc &a : bin.arcs) {
      arcs.push_back({a.token == kDelete ? kNoToken : vocab.At(a.token), a.score});
    }
    bins.push_back(std::move(arcs));
  }
  bins.push_back({{Vocabulary::kEosId, 1.0}});

  FractionalCounts counts(order);
  CnWindowCounter counter(std::move(bins), order, options);
  for (std::size_t start = 0; start < cn.bins.size() + 2; ++start) {
    counter.CountFrom(start, &counts);
  }
  return counts;
}

}  // namespace cnlm
