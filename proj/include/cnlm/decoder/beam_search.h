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
// Beam search and group (diverse) beam search over a Scorer.
//
// Scores are raw sums of token log-probabilities; there is no length
// normalization. A prefix that emits </s> is completed and leaves the
// active beam, so its slot is refilled by the next best candidate. Ties are
// broken by token string, then by the parent's position in the beam.

#ifndef CNLM_DECODER_BEAM_SEARCH_H_
#define CNLM_DECODER_BEAM_SEARCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cnlm/decoder/scorer.h"
#include "cnlm/nbest/nbest_list.h"

namespace cnlm {

enum class NodeState : std::uint8_t {
  kRoot,
  kExpanded,   // has at least one surviving child
  kCompleted,  // ends in </s>
  kTruncated,  // still active when max_len was reached
  kPruned,     // dropped from the beam, or never expanded
};

const char *NodeStateName(NodeState state);

struct BeamNode {
  int parent = -1;
  TokenId token = kNoToken;
  double logprob = 0.0;  // of the arc into this node
  double score = 0.0;    // cumulative from the root
  int group = 0;
  NodeState state = NodeState::kPruned;
};

// Search tree rooted at a <pad> node (id 0).
class BeamGraph {
 public:
  BeamGraph();

  int AddNode(int parent, TokenId token, double logprob, int group);

  const BeamNode &node(int id) const { return nodes_.at(id); }
  BeamNode &mutable_node(int id) { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  // Token ids from the root (exclusive) to `id` (inclusive).
  std::vector<TokenId> PathTokens(int id) const;

  // Sum of arc log-probabilities along the path, recomputed.
  double PathLogProb(int id) const;

  // One record per node except the root's parent:
  //   graph_id node_id parent_id token logprob flags
  // tab-separated; the root is written with parent -1.
  std::string Format(const std::string &graph_id, const Vocabulary &vocab) const;

 private:
  std::vector<BeamNode> nodes_;
};

struct BeamSearchOptions {
  int beam = 5;
  int groups = 1;
  double diversity = 0.5;  // Hamming diversity strength; ignored for 1 group
  int max_len = 50;
};

struct DecodeResult {
  BeamGraph graph;
  NBestList nbest;
  std::vector<int> leaves;  // graph node of each nbest hypothesis
  // Per-group final hypotheses, before merging.
  std::vector<std::vector<Hypothesis>> group_hypotheses;
};

// Plain beam search; identical to DiverseBeamSearch with one group.
DecodeResult BeamSearch(const Scorer &scorer, const Sentence &source, int beam,
                        int max_len);

// Group beam search: the beam is split into `groups` sub-beams of
// beam/groups entries, expanded in order at every step. A candidate token's
// score in group g is lowered by diversity * (number of times groups before
// g selected that token at the same step). Reported log-likelihoods are
// the unpenalized path sums. Identical paths found by several groups are
// reported once.
DecodeResult DiverseBeamSearch(const Scorer &scorer, const Sentence &source,
                               const BeamSearchOptions &options);

}  // namespace cnlm

#endif  // CNLM_DECODER_BEAM_SEARCH_H_
