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

#ifndef CNLM_CORE_VOCABULARY_H_
#define CNLM_CORE_VOCABULARY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnlm/core/token.h"

namespace cnlm {

using TokenId = std::int32_t;

inline constexpr TokenId kNoToken = -1;

// Dense bidirectional token <-> id map. Ids 0..5 are always the special
// tokens, in the order <s>, </s>, <unk>, <d>, <pad>, *DELETE*.
class Vocabulary {
 public:
  static constexpr TokenId kBosId = 0;
  static constexpr TokenId kEosId = 1;
  static constexpr TokenId kUnkId = 2;
  static constexpr TokenId kDigitId = 3;
  static constexpr TokenId kPadId = 4;
  static constexpr TokenId kDeleteId = 5;
  static constexpr int kNumSpecial = 6;

  // A vocabulary holding only the special tokens.
  Vocabulary();

  // Specials first, then `words` in the given order. Duplicates and
  // specials inside `words` are skipped.
  explicit Vocabulary(std::span<const Token> words);

  // Returns the id of `token`, adding it if absent.
  TokenId Add(std::string_view token);

  std::optional<TokenId> Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token).has_value(); }

  // Id of `token`, or the <unk> id when absent.
  TokenId IdOrUnk(std::string_view token) const;

  // Id of `token`; throws Error when absent.
  TokenId At(std::string_view token) const;

  const Token &Word(TokenId id) const;
  std::size_t size() const { return words_.size(); }
  const std::vector<Token> &words() const { return words_; }

  friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
    return a.words_ == b.words_;
  }

 private:
  std::vector<Token> words_;
  std::unordered_map<std::string, TokenId> index_;
};

// Builds a vocabulary from normalized sentences: every token occurring at
// least `min_count` times, sorted lexicographically after the specials.
// Throws Error if the corpus holds no tokens.
Vocabulary BuildVocab(std::span<const Sentence> corpus, int min_count = 1);

// Replaces every token missing from `vocab` by <unk>.
Sentence MapOov(const Sentence &tokens, const Vocabulary &vocab);

// Fraction of tokens in `corpus` missing from `vocab`.
double OovRate(std::span<const Sentence> corpus, const Vocabulary &vocab);

}  // namespace cnlm

#endif  // CNLM_CORE_VOCABULARY_H_
