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

#include "cnlm/decoder/beam_search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"

namespace cnlm {
namespace {

constexpr int kArcDecimals = 8;

struct Entry {
  int node = 0;
  double score = 0.0;
  std::vector<TokenId> prefix;
};

struct Candidate {
  double augmented;
  double raw;
  double logprob;
  TokenId token;
  int parent;  // index into the group's active beam
};

struct Finished {
  Hypothesis hyp;
  int leaf;
};

void SortFinished(std::vector<Finished> *items) {
  std::stable_sort(items->begin(), items->end(),
                   [](const Finished &a, const Finished &b) {
                     if (a.hyp.loglik != b.hyp.loglik) {
                       return a.hyp.loglik > b.hyp.loglik;
                     }
                     return a.hyp.tokens < b.hyp.tokens;
                   });
}

// Position of every id when the vocabulary is sorted by surface string.
std::vector<int> LexicographicRanks(const Vocabulary &vocab) {
  std::vector<TokenId> order(vocab.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return vocab.Word(a) < vocab.Word(b);
  });
  std::vector<int> rank(vocab.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }
  return rank;
}

Hypothesis MakeHypothesis(const BeamGraph &graph, int leaf,
                          const Vocabulary &vocab) {
  Hypothesis h;
  for (TokenId id : graph.PathTokens(leaf)) h.tokens.push_back(vocab.Word(id));
  h.loglik = graph.node(leaf).score;
  return h;
}

}  // namespace

const char *NodeStateName(NodeState state) {
  switch (state) {
    case NodeState::kRoot:
      return "root";
    case NodeState::kExpanded:
      return "expanded";
    case NodeState::kCompleted:
      return "completed";
    case NodeState::kTruncated:
      return "truncated";
    case NodeState::kPruned:
      return "pruned";
  }
  return "?";
}

BeamGraph::BeamGraph() {
  BeamNode root;
  root.token = Vocabulary::kPadId;
  root.state = NodeState::kRoot;
  nodes_.push_back(root);
}

int BeamGraph::AddNode(int parent, TokenId token, double logprob, int group) {
  BeamNode n;
  n.parent = parent;
  n.token = token;
  n.logprob = logprob;
  n.score = nodes_.at(parent).score + logprob;
  n.group = group;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

std::vector<TokenId> BeamGraph::PathTokens(int id) const {
  std::vector<TokenId> path;
  for (int n = id; n > 0; n = nodes_.at(n).parent) {
    path.push_back(nodes_[n].token);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double BeamGraph::PathLogProb(int id) const {
  std::vector<double> arcs;
  for (int n = id; n > 0; n = nodes_.at(n).parent) arcs.push_back(nodes_[n].logprob);
  // Root-to-leaf order reproduces the decoder's accumulation exactly.
  double sum = 0.0;
  for (auto it = arcs.rbegin(); it != arcs.rend(); ++it) sum += *it;
  return sum;
}

std::string BeamGraph::Format(const std::string &graph_id,
                              const Vocabulary &vocab) const {
  std::string out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const BeamNode &n = nodes_[i];
    out += graph_id;
    out += '\t';
    out += std::to_string(i);
    out += '\t';
    out += std::to_string(n.parent);
    out += '\t';
    out += vocab.Word(n.token);
    out += '\t';
    out += FormatFixed(n.logprob, kArcDecimals);
    out += '\t';
    out += NodeStateName(n.state);
    out += '\n';
  }
  return out;
}

DecodeResult BeamSearch(const Scorer &scorer, const Sentence &source, int beam,
                        int max_len) {
  BeamSearchOptions options;
  options.beam = beam;
  options.groups = 1;
  options.max_len = max_len;
  return DiverseBeamSearch(scorer, source, options);
}

DecodeResult DiverseBeamSearch(const Scorer &scorer, const Sentence &source,
                               const BeamSearchOptions &options) {
  if (options.beam < 1) throw Error("beam width must be >= 1");
  if (options.max_len < 1) throw Error("max_len must be >= 1");
  if (options.groups < 1 || options.beam % options.groups != 0) {
    throw Error("number of groups must divide the beam width");
  }
  if (!(options.diversity >= 0.0) || std::isinf(options.diversity)) {
    throw Error("diversity strength must be finite and >= 0");
  }

  const Vocabulary &vocab = scorer.vocab();
  const std::size_t vocab_size = vocab.size();
  const std::vector<int> lex_rank = LexicographicRanks(vocab);
  const int groups = options.groups;
  const int width = options.beam / groups;
  const SourceContext context = scorer.Prepare(source);

  DecodeResult result;
  BeamGraph &graph = result.graph;
  std::vector<std::vector<Entry>> active(groups, {Entry{}});
  std::vector<std::vector<Finished>> finished(groups);
  std::vector<bool> done(groups, false);

  const auto better = [&](const Candidate &a, const Candidate &b) {
    if (a.augmented != b.augmented) return a.augmented > b.augmented;
    if (a.token != b.token) {
      return lex_rank[static_cast<std::size_t>(a.token)] <
             lex_rank[static_cast<std::size_t>(b.token)];
    }
    return a.parent < b.parent;
  };

  int step = 0;
  for (; step < options.max_len; ++step) {
    bool any_active = false;
    std::vector<int> selected(vocab_size, 0);
    for (int g = 0; g < groups; ++g) {
      if (done[g]) continue;
      std::vector<Entry> &beam = active[g];

      std::vector<Candidate> candidates;
      for (std::size_t k = 0; k < beam.size(); ++k) {
        const Entry &e = beam[k];
        const std::vector<double> logprobs =
            scorer.NextLogProbs(context, e.prefix);
        if (logprobs.size() != vocab_size) {
          throw Error("scorer returned " + std::to_string(logprobs.size()) +
                      " scores for a vocabulary of " +
                      std::to_string(vocab_size));
        }
        for (std::size_t v = 0; v < vocab_size; ++v) {
          const double lp = logprobs[v];
          if (std::isnan(lp)) throw NumericError("scorer returned NaN");
          if (lp == -std::numeric_limits<double>::infinity()) continue;
          const double raw = e.score + lp;
          candidates.push_back({raw - options.diversity * selected[v], raw, lp,
                                static_cast<TokenId>(v), static_cast<int>(k)});
        }
      }

      // Each parent contributes at most one </s>, so 2*width candidates
      // always yield `width` survivors when enough exist.
      const std::size_t keep =
          std::min(candidates.size(), static_cast<std::size_t>(2 * width));
      std::partial_sort(candidates.begin(),
                        candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                        candidates.end(), better);

      std::vector<Entry> next;
      for (std::size_t pos = 0; pos < keep; ++pos) {
        if (static_cast<int>(next.size()) == width) break;
        const Candidate &c = candidates[pos];
        const bool is_eos = c.token == Vocabulary::kEosId;
        if (is_eos && pos >= static_cast<std::size_t>(width)) continue;
        const Entry &parent = beam[static_cast<std::size_t>(c.parent)];
        const int node = graph.AddNode(parent.node, c.token, c.logprob, g);
        if (parent.node != 0) {
          graph.mutable_node(parent.node).state = NodeState::kExpanded;
        }
        ++selected[static_cast<std::size_t>(c.token)];
        if (is_eos) {
          graph.mutable_node(node).state = NodeState::kCompleted;
          finished[g].push_back({MakeHypothesis(graph, node, vocab), node});
        } else {
          Entry child{node, graph.node(node).score, parent.prefix};
          child.prefix.push_back(c.token);
          next.push_back(std::move(child));
        }
      }
      beam = std::move(next);

      // Scores only decrease, so once `width` completions beat every active
      // prefix the group cannot improve.
      if (beam.empty()) {
        done[g] = true;
      } else if (static_cast<int>(finished[g].size()) >= width) {
        std::vector<double> scores;
        for (const Finished &f : finished[g]) scores.push_back(f.hyp.loglik);
        std::nth_element(scores.begin(), scores.begin() + (width - 1),
                         scores.end(), std::greater<>());
        double best_active = -std::numeric_limits<double>::infinity();
        for (const Entry &e : beam) best_active = std::max(best_active, e.score);
        if (best_active < scores[static_cast<std::size_t>(width - 1)]) {
          done[g] = true;
        }
      }
      if (!done[g]) any_active = true;
    }
    if (!any_active) break;
  }

  for (int g = 0; g < groups; ++g) {
    if (!done[g]) {
      for (const Entry &e : active[g]) {
        graph.mutable_node(e.node).state = NodeState::kTruncated;
        finished[g].push_back({MakeHypothesis(graph, e.node, vocab), e.node});
      }
    }
    SortFinished(&finished[g]);
    if (static_cast<int>(finished[g].size()) > width) finished[g].resize(width);
  }

  std::vector<Finished> merged;
  std::set<Sentence> seen;
  result.group_hypotheses.resize(groups);
  for (int g = 0; g < groups; ++g) {
    for (const Finished &f : finished[g]) {
      result.group_hypotheses[g].push_back(f.hyp);
      if (seen.insert(f.hyp.tokens).second) merged.push_back(f);
    }
  }
  SortFinished(&merged);

  result.nbest.source = source;
  for (const Finished &f : merged) {
    result.nbest.hypotheses.push_back(f.hyp);
    result.leaves.push_back(f.leaf);
  }
  return result;
}

}  // namespace cnlm
