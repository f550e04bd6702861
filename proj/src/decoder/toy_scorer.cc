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

#include "cnlm/decoder/toy_scorer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "cnlm/core/error.h"

namespace cnlm {
namespace {

std::string AsciiLower(std::string_view token) {
  std::string out(token);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

ToyScorer TrainToyScorer(const std::vector<SentencePair> &corpus,
                         const ToyScorerOptions &options) {
  if (corpus.empty()) throw Error("cannot train a scorer on an empty corpus");
  if (!(options.lexicon_weight >= 0.0) || std::isinf(options.lexicon_weight)) {
    throw Error("lexicon_weight must be finite and >= 0");
  }

  std::set<Token> words;
  for (const SentencePair &p : corpus) {
    for (const Token &t : p.target) {
      if (!IsSpecial(t)) words.insert(t);
    }
  }
  if (words.empty()) throw Error("parallel corpus has no target words");

  ToyScorer scorer;
  scorer.lexicon_weight_ = options.lexicon_weight;
  for (const Token &w : words) scorer.vocab_.Add(w);
  const std::size_t vocab_size = scorer.vocab_.size();
  scorer.producible_.assign(vocab_size, false);
  scorer.producible_[Vocabulary::kEosId] = true;
  for (std::size_t v = Vocabulary::kNumSpecial; v < vocab_size; ++v) {
    scorer.producible_[v] = true;
  }
  scorer.support_size_ = static_cast<double>(words.size() + 1);
  const double support = scorer.support_size_;

  std::vector<std::vector<double>> bigram_counts(
      vocab_size, std::vector<double>(vocab_size, 0.0));
  std::map<Token, std::vector<double>> cooc;
  std::vector<double> unigram_counts(vocab_size, 0.0);
  std::map<Token, std::map<std::pair<TokenId, TokenId>, double>> conditioned;
  std::map<Token, double> doc_freq;
  for (const SentencePair &p : corpus) {
    std::vector<TokenId> target;
    for (const Token &t : p.target) {
      if (!IsSpecial(t)) target.push_back(scorer.vocab_.At(t));
    }
    target.push_back(Vocabulary::kEosId);
    TokenId prev = Vocabulary::kBosId;
    for (TokenId t : target) {
      unigram_counts[static_cast<std::size_t>(t)] += 1.0;
      bigram_counts[static_cast<std::size_t>(prev)][static_cast<std::size_t>(t)] += 1.0;
      prev = t;
    }
    for (const Token &s : p.source) {
      auto &row = cooc[s];
      if (row.empty()) row.assign(vocab_size, 0.0);
      for (TokenId t : target) row[static_cast<std::size_t>(t)] += 1.0;
    }
    const std::set<Token> types(p.source.begin(), p.source.end());
    for (const Token &s : types) {
      doc_freq[s] += 1.0;
      auto &pairs = conditioned[s];
      TokenId before = Vocabulary::kBosId;
      for (TokenId t : target) {
        pairs[{before, t}] += 1.0;
        before = t;
      }
    }
  }

  const auto smooth = [&](const std::vector<double> &counts) {
    double total = 0.0;
    for (std::size_t v = 0; v < vocab_size; ++v) {
      if (scorer.producible_[v]) total += counts[v];
    }
    std::vector<double> probs(vocab_size, 0.0);
    for (std::size_t v = 0; v < vocab_size; ++v) {
      if (scorer.producible_[v]) probs[v] = (counts[v] + 1.0) / (total + support);
    }
    return probs;
  };

  scorer.marginal_ = smooth(unigram_counts);
  std::unordered_set<std::string> source_spellings;
  for (const auto &entry : cooc) source_spellings.insert(AsciiLower(entry.first));
  scorer.copyable_.assign(vocab_size, false);
  scorer.spelling_.assign(vocab_size, std::string());
  for (std::size_t v = Vocabulary::kNumSpecial; v < vocab_size; ++v) {
    scorer.spelling_[v] = AsciiLower(scorer.vocab_.Word(static_cast<TokenId>(v)));
    scorer.copyable_[v] = source_spellings.contains(scorer.spelling_[v]);
  }
  scorer.bigram_.reserve(vocab_size);
  for (const auto &row : bigram_counts) scorer.bigram_.push_back(smooth(row));
  for (const auto &[source_word, row] : cooc) {
    scorer.lexicon_.emplace(source_word, smooth(row));
  }
  const double num_pairs = static_cast<double>(corpus.size());
  for (const auto &[source_word, pairs] : conditioned) {
    ToyScorer::ConditionedBigram &model = scorer.conditioned_[source_word];
    model.idf = std::log(1.0 + num_pairs / doc_freq[source_word]);
    for (const auto &[gram, count] : pairs) {
      model.rows[gram.first].emplace_back(gram.second, count);
      model.context_total[gram.first] += count;
    }
  }
  return scorer;
}

SourceContext ToyScorer::Prepare(const Sentence &source) const {
  SourceContext context{source, std::vector<double>(vocab_.size(), 0.0)};
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (!producible_[v]) continue;
    if (source.empty()) {
      context.cache[v] = 1.0;
      continue;
    }
    double mean = 0.0;
    for (const Token &s : source) {
      auto it = lexicon_.find(s);
      mean += it == lexicon_.end() ? marginal_[v] : it->second[v];
    }
    context.cache[v] = mean / static_cast<double>(source.size()) / marginal_[v];
  }
  // Tokens spelled the same on both sides (names, numbers) are only boosted
  // when they occur in this source.
  std::unordered_set<std::string> present;
  for (const Token &s : source) present.insert(AsciiLower(s));
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (copyable_[v] && !present.contains(spelling_[v])) {
      context.cache[v] = std::min(context.cache[v], 1.0);
    }
  }
  return context;
}

std::vector<double> ToyScorer::NextLogProbs(
    const SourceContext &source, std::span<const TokenId> prefix) const {
  if (source.cache.size() != vocab_.size()) {
    throw Error("source context was not prepared by this scorer");
  }
  const TokenId prev = prefix.empty() ? Vocabulary::kBosId : prefix.back();
  if (prev < 0 || static_cast<std::size_t>(prev) >= vocab_.size()) {
    throw Error("prefix token id out of range");
  }
  const std::vector<double> &global = bigram_[static_cast<std::size_t>(prev)];

  // Mixture over source tokens of bigrams conditioned on that token, each
  // interpolated with the global bigram; weights are normalized idf.
  std::vector<double> row(vocab_.size(), 0.0);
  double idf_total = 0.0;
  for (const Token &s : source.tokens) {
    if (auto it = conditioned_.find(s); it != conditioned_.end()) {
      idf_total += it->second.idf;
    }
  }
  double global_share = idf_total > 0.0 ? 0.0 : 1.0;
  for (const Token &s : source.tokens) {
    auto it = conditioned_.find(s);
    if (it == conditioned_.end()) continue;
    const ConditionedBigram &model = it->second;
    const double alpha = model.idf / idf_total;
    auto total = model.context_total.find(prev);
    const double seen = total == model.context_total.end() ? 0.0 : total->second;
    const double denom = seen + kConditionedPrior;
    global_share += alpha * kConditionedPrior / denom;
    if (seen == 0.0) continue;
    for (const auto &[w, count] : model.rows.at(prev)) {
      row[static_cast<std::size_t>(w)] += alpha * count / denom;
    }
  }
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    row[v] += global_share * global[v];
  }

  std::vector<double> out(vocab_.size(),
                          -std::numeric_limits<double>::infinity());
  // Coverage: a token already emitted loses its lexicon boost.
  std::vector<bool> used(vocab_.size(), false);
  for (TokenId t : prefix) {
    if (t >= 0 && static_cast<std::size_t>(t) < used.size()) {
      used[static_cast<std::size_t>(t)] = true;
    }
  }
  double max = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (!producible_[v]) continue;
    const double ratio =
        used[v] ? std::min(source.cache[v], 1.0) : source.cache[v];
    out[v] = std::log(row[v]) + lexicon_weight_ * std::log(ratio);
    max = std::max(max, out[v]);
  }
  double total = 0.0;
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (producible_[v]) total += std::exp(out[v] - max);
  }
  const double log_z = max + std::log(total);
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    if (producible_[v]) out[v] -= log_z;
  }
  return out;
}

}  // namespace cnlm
