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

#include "cnlm/cnbuild/mesh.h"

#include <algorithm>
#include <numeric>

#include "cnlm/core/error.h"
#include "cnlm/nbest/postprocess.h"

namespace cnlm {
namespace {

enum class Move : unsigned char { kDiagonal, kDelete, kInsert };

struct Cell {
  int cost = 0;
  Move move = Move::kDiagonal;
};

bool ArcBefore(const Arc &a, const Arc &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.token < b.token;
}

// Sums arcs with equal tokens, keeping first-seen order.
std::vector<Arc> MergeArcs(const std::vector<Arc> &arcs) {
  std::vector<Arc> out;
  for (const Arc &a : arcs) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Arc &b) { return b.token == a.token; });
    if (it == out.end()) {
      out.push_back(a);
    } else {
      it->score += a.score;
    }
  }
  return out;
}

}  // namespace

void Mesh::AddToColumn(Column *column, const Token &token, double weight) {
  auto it = std::find_if(column->arcs.begin(), column->arcs.end(),
                         [&](const Arc &a) { return a.token == token; });
  if (it == column->arcs.end()) {
    column->arcs.push_back(Arc{token, weight});
  } else {
    it->score += weight;
  }
  column->per_hyp.push_back(token);
}

void Mesh::Align(const Sentence &hyp, double weight) {
  if (hyp.empty()) return;
  if (!(weight > 0.0)) throw Error("alignment weight must be positive");

  const std::size_t rows = columns_.size();
  const std::size_t cols = hyp.size();
  std::vector<std::vector<Cell>> chart(rows + 1, std::vector<Cell>(cols + 1));
  for (std::size_t j = 1; j <= cols; ++j) {
    chart[0][j] = {chart[0][j - 1].cost + 1, Move::kInsert};
  }
  for (std::size_t i = 1; i <= rows; ++i) {
    chart[i][0] = {chart[i - 1][0].cost + 1, Move::kDelete};
    const Column &column = columns_[i - 1];
    for (std::size_t j = 1; j <= cols; ++j) {
      const bool present =
          std::any_of(column.arcs.begin(), column.arcs.end(),
                      [&](const Arc &a) { return a.token == hyp[j - 1]; });
      Cell best{chart[i - 1][j - 1].cost + (present ? 0 : 1), Move::kDiagonal};
      const int del = chart[i - 1][j].cost + 1;
      if (del < best.cost) best = {del, Move::kDelete};
      const int ins = chart[i][j - 1].cost + 1;
      if (ins < best.cost) best = {ins, Move::kInsert};
      chart[i][j] = best;
    }
  }

  std::size_t i = rows;
  std::size_t j = cols;
  while (i > 0 || j > 0) {
    switch (chart[i][j].move) {
      case Move::kDiagonal:
        AddToColumn(&columns_[i - 1], hyp[j - 1], weight);
        --i;
        --j;
        break;
      case Move::kDelete:
        AddToColumn(&columns_[i - 1], Token(kDelete), weight);
        --i;
        break;
      case Move::kInsert: {
        Column fresh;
        if (total_ > 0.0) fresh.arcs.push_back(Arc{Token(kDelete), total_});
        fresh.per_hyp.assign(num_hyps_, Token(kDelete));
        AddToColumn(&fresh, hyp[j - 1], weight);
        columns_.insert(columns_.begin() + static_cast<std::ptrdiff_t>(i),
                        std::move(fresh));
        --j;
        break;
      }
    }
  }
  total_ += weight;
  ++num_hyps_;
}

ConfusionNetwork Mesh::ToConfusionNetwork(const std::string &source_id) const {
  ConfusionNetwork cn;
  cn.source_id = source_id;
  for (const Column &c : columns_) cn.bins.push_back(Bin{c.arcs});
  return cn;
}

std::vector<Sentence> Mesh::AlignedPaths() const {
  std::vector<Sentence> paths(num_hyps_);
  for (const Column &c : columns_) {
    for (std::size_t h = 0; h < num_hyps_; ++h) paths[h].push_back(c.per_hyp[h]);
  }
  return paths;
}

ConfusionNetwork HandleDeletes(const ConfusionNetwork &cn) {
  ConfusionNetwork out;
  out.source_id = cn.source_id;
  for (const Bin &bin : cn.bins) {
    if (bin.OnlyDeletes()) continue;
    Bin merged;
    double deletes = 0.0;
    bool has_delete = false;
    for (const Arc &a : bin.arcs) {
      if (a.token == kDelete) {
        deletes += a.score;
        has_delete = true;
      } else {
        merged.arcs.push_back(a);
      }
    }
    if (has_delete) merged.arcs.push_back(Arc{Token(kDelete), deletes});
    out.bins.push_back(std::move(merged));
  }
  return out;
}

ConfusionNetwork CollapseEquivalentArcs(const ConfusionNetwork &cn,
                                        const Vocabulary *vocab) {
  ConfusionNetwork out;
  out.source_id = cn.source_id;
  for (const Bin &bin : cn.bins) {
    std::vector<Arc> mapped;
    for (const Arc &a : bin.arcs) {
      Token token = NormalizeToken(a.token);
      if (vocab != nullptr && !vocab->Contains(token)) token = Token(kUnk);
      mapped.push_back(Arc{std::move(token), a.score});
    }
    out.bins.push_back(Bin{MergeArcs(mapped)});
  }
  return out;
}

ConfusionNetwork CapArcs(const ConfusionNetwork &cn, int max_arcs) {
  if (max_arcs < 0) throw Error("max_arcs must be >= 0");
  ConfusionNetwork out = cn;
  if (max_arcs == 0) return out;
  const auto cap = static_cast<std::size_t>(max_arcs);
  for (Bin &bin : out.bins) {
    if (bin.arcs.size() <= cap) continue;
    std::vector<Arc> sorted = bin.arcs;
    std::stable_sort(sorted.begin(), sorted.end(), ArcBefore);
    std::vector<Arc> kept(sorted.begin(),
                          sorted.begin() + static_cast<std::ptrdiff_t>(cap));
    if (Bin{kept}.OnlyDeletes()) {
      auto word = std::find_if(sorted.begin(), sorted.end(), [](const Arc &a) {
        return a.token != kDelete;
      });
      if (word != sorted.end()) kept.back() = *word;
    }
    bin.arcs = std::move(kept);
  }
  return out;
}

ConfusionNetwork NormalizeAndSort(const ConfusionNetwork &cn) {
  ConfusionNetwork out = cn;
  for (std::size_t k = 0; k < out.bins.size(); ++k) {
    Bin &bin = out.bins[k];
    const double total = bin.Total();
    if (!(total > 0.0)) {
      throw ValidationError(cn.source_id + ": bin " + std::to_string(k) +
                            " has zero total score");
    }
    for (Arc &a : bin.arcs) a.score /= total;
    std::stable_sort(bin.arcs.begin(), bin.arcs.end(), ArcBefore);
  }
  return out;
}

Mesh BuildMesh(const NBestList &nbest, double posterior_scale) {
  if (nbest.hypotheses.empty()) {
    throw Error("cannot build a confusion network from an empty N-best list");
  }
  std::vector<double> posteriors = nbest.posteriors;
  if (posteriors.size() != nbest.hypotheses.size()) {
    std::vector<double> logliks;
    for (const Hypothesis &h : nbest.hypotheses) logliks.push_back(h.loglik);
    posteriors = NBestPosteriors(logliks, posterior_scale);
  }
  std::vector<std::size_t> order(posteriors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return posteriors[a] > posteriors[b];
  });
  Mesh mesh;
  for (std::size_t idx : order) {
    if (posteriors[idx] > 0.0) mesh.Align(nbest.hypotheses[idx].tokens, posteriors[idx]);
  }
  return mesh;
}

ConfusionNetwork BuildConfusionNetwork(const NBestList &nbest,
                                       const CnBuildOptions &options,
                                       const Vocabulary *vocab) {
  const Mesh mesh = BuildMesh(nbest, options.posterior_scale);
  ConfusionNetwork cn = mesh.ToConfusionNetwork(nbest.source_id);
  cn = HandleDeletes(cn);
  cn = CollapseEquivalentArcs(cn, vocab);
  cn = CapArcs(cn, options.max_arcs);
  return NormalizeAndSort(cn);
}

}  // namespace cnlm
