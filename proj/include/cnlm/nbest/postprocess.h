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
// Cleanup of raw decoder N-best lists before confusion network building.

#ifndef CNLM_NBEST_POSTPROCESS_H_
#define CNLM_NBEST_POSTPROCESS_H_

#include <span>
#include <vector>

#include "cnlm/nbest/nbest_list.h"

namespace cnlm {

// Drops everything from the first </s> or <pad> on, inclusive.
Sentence PruneAtEos(const Sentence &tokens);

// Allowed excess length of a translation over its source:
// max(3, 1 + source_len / 5), real-valued.
double LengthSlack(std::size_t source_len);

// If the hypothesis overshoots the source by at least LengthSlack tokens,
// collapses the shortest repeated block at its end to a single copy and
// then truncates to floor(source_len + slack) tokens. Shorter hypotheses are
// returned unchanged.
Sentence PruneRepetition(const Sentence &tokens, std::size_t source_len);

// Punctuation stripping, end-of-sentence pruning and repetition pruning on
// every hypothesis; hypotheses that end up identical are merged by
// log-sum-exp of their log-likelihoods, empty ones are dropped, and the
// list is re-sorted. Throws Error if nothing survives.
NBestList PostprocessNBest(const NBestList &raw);

// p_n = exp(scale * ll_n) / sum_m exp(scale * ll_m), max-shifted.
std::vector<double> NBestPosteriors(std::span<const double> logliks,
                                    double scale = 1.0);

// Keeps the first `n` hypotheses (n >= 1). Posteriors are dropped since
// they no longer sum to one.
NBestList TruncateNBest(const NBestList &list, std::size_t n);

}  // namespace cnlm

#endif  // CNLM_NBEST_POSTPROCESS_H_
