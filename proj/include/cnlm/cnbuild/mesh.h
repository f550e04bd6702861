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
// Word mesh construction from an N-best list, in the style of SRILM's
// nbest-lattice: hypotheses are aligned one at a time against the growing
// mesh with a minimum edit-cost dynamic program.

#ifndef CNLM_CNBUILD_MESH_H_
#define CNLM_CNBUILD_MESH_H_

#include <vector>

#include "cnlm/cnbuild/confusion_network.h"
#include "cnlm/core/vocabulary.h"
#include "cnlm/nbest/nbest_list.h"

namespace cnlm {

// Confusion network under construction. Every aligned hypothesis
// contributes its weight to exactly one arc per column, so column totals
// always equal the total aligned weight.
class Mesh {
 public:
  // Aligns `hyp` and adds `weight` along the chosen path. Cost is 0 when a
  // column already holds the token, 1 for a substitution, an insertion
  // (new column) or a deletion (hypothesis gap, recorded as *DELETE*). Ties
  // prefer match/substitution, then deletion, then insertion. A new column
  // receives a *DELETE* arc carrying all previously aligned weight. Empty
  // hypotheses are ignored.
  void Align(const Sentence &hyp, double weight);

  std::size_t num_columns() const { return columns_.size(); }
  double total_weight() const { return total_; }

  // Arcs in first-seen order; scores are raw accumulated weights.
  ConfusionNetwork ToConfusionNetwork(const std::string &source_id) const;

  // For each aligned hypothesis, in alignment order, the token it occupies
  // in every column (*DELETE* for gaps).
  std::vector<Sentence> AlignedPaths() const;

 private:
  struct Column {
    std::vector<Arc> arcs;
    std::vector<Token> per_hyp;  // indexed by alignment order
  };

  void AddToColumn(Column *column, const Token &token, double weight);

  std::vector<Column> columns_;
  double total_ = 0.0;
  std::size_t num_hyps_ = 0;
};

// Removes bins that hold only *DELETE* arcs and merges the *DELETE* arcs of
// every other bin into one.
ConfusionNetwork HandleDeletes(const ConfusionNetwork &cn);

// Normalizes every arc token (lowercase, digits to <d>), then maps tokens
// missing from `vocab` to <unk> when `vocab` is given, summing the scores of
// arcs that become equal.
ConfusionNetwork CollapseEquivalentArcs(const ConfusionNetwork &cn,
                                        const Vocabulary *vocab);

// Keeps the `max_arcs` best arcs of each bin (ties by token). If that would
// leave only *DELETE*, the best word arc is kept instead. 0 = no limit.
ConfusionNetwork CapArcs(const ConfusionNetwork &cn, int max_arcs);

// Rescales each bin to sum to one and sorts arcs by descending score, ties
// by token. Throws ValidationError for a bin with zero total.
ConfusionNetwork NormalizeAndSort(const ConfusionNetwork &cn);

struct CnBuildOptions {
  int max_arcs = 5;              // 0 = unlimited
  double posterior_scale = 1.0;  // applied when posteriors are absent
};

// Full pipeline: mesh from the best hypothesis, remaining hypotheses aligned
// by decreasing posterior, then HandleDeletes, CollapseEquivalentArcs,
// CapArcs and NormalizeAndSort. `vocab` may be null to skip OOV mapping.
// Throws Error for an empty list.
ConfusionNetwork BuildConfusionNetwork(const NBestList &nbest,
                                       const CnBuildOptions &options,
                                       const Vocabulary *vocab);

// The mesh before finalization, for inspection.
Mesh BuildMesh(const NBestList &nbest, double posterior_scale);

}  // namespace cnlm

#endif  // CNLM_CNBUILD_MESH_H_
