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
// Token-level text normalization shared by the decoder, confusion network
// builder and the language models. Tokens are whitespace-free UTF-8 strings.

#ifndef CNLM_CORE_TOKEN_H_
#define CNLM_CORE_TOKEN_H_

#include <string>
#include <string_view>
#include <vector>

namespace cnlm {

using Token = std::string;
using Sentence = std::vector<Token>;

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr std::string_view kDigit = "<d>";
inline constexpr std::string_view kPad = "<pad>";
inline constexpr std::string_view kDelete = "*DELETE*";

// True for the six reserved symbols above.
bool IsSpecial(std::string_view token);

// True if every code point of `token` is punctuation (and it is non-empty).
bool IsPunctuation(std::string_view token);

// Removes punctuation that forms a whole token or sits at a token edge.
// Punctuation flanked by alphanumerics on both sides ("it's", "8:30") is
// kept, as is the final period of letter-period acronyms ("p.m."). Tokens
// that become empty are dropped. Special tokens pass through untouched.
Sentence StripPunctuation(const Sentence &tokens);

// Lowercases `token`; digit strings with internal ':' ',' '.' become "<d>".
// Special tokens are returned unchanged, which makes this idempotent.
Token NormalizeToken(std::string_view token);

Sentence NormalizeTokens(const Sentence &tokens);

// Splits on ASCII whitespace; runs of whitespace produce no empty tokens.
Sentence SplitTokens(std::string_view line);

std::string JoinTokens(const Sentence &tokens, std::string_view sep = " ");

}  // namespace cnlm

#endif  // CNLM_CORE_TOKEN_H_
