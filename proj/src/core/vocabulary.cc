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

#include "cnlm/core/vocabulary.h"

#include <map>

#include "cnlm/core/error.h"

namespace cnlm {

Vocabulary::Vocabulary() {
  for (std::string_view s : {kBos, kEos, kUnk, kDigit, kPad, kDelete}) Add(s);
}

Vocabulary::Vocabulary(std::span<const Token> words) : Vocabulary() {
  for (const Token &w : words) Add(w);
}

TokenId Vocabulary::Add(std::string_view token) {
  if (auto id = Find(token)) return *id;
  const auto id = static_cast<TokenId>(words_.size());
  words_.emplace_back(token);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::IdOrUnk(std::string_view token) const {
  auto id = Find(token);
  return id ? *id : kUnkId;
}

TokenId Vocabulary::At(std::string_view token) const {
  auto id = Find(token);
  if (!id) throw Error("token not in vocabulary: '" + std::string(token) + "'");
  return *id;
}

const Token &Vocabulary::Word(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
    throw Error("token id out of range: " + std::to_string(id));
  }
  return words_[static_cast<std::size_t>(id)];
}

Vocabulary BuildVocab(std::span<const Sentence> corpus, int min_count) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  std::map<Token, int> counts;
  std::size_t total = 0;
  for (const Sentence &s : corpus) {
    for (const Token &t : s) {
      ++counts[t];
      ++total;
    }
  }
  if (total == 0) throw Error("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  for (const auto &[token, count] : counts) {
    if (count >= min_count) vocab.Add(token);
  }
  return vocab;
}

Sentence MapOov(const Sentence &tokens, const Vocabulary &vocab) {
  Sentence out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) {
    out.push_back(vocab.Contains(t) ? t : Token(kUnk));
  }
  return out;
}

double OovRate(std::span<const Sentence> corpus, const Vocabulary &vocab) {
  std::size_t total = 0;
  std::size_t oov = 0;
  for (const Sentence &s : corpus) {
    for (const Token &t : s) {
      ++total;
      if (!vocab.Contains(t)) ++oov;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(oov) / total;
}

}  // namespace cnlm
