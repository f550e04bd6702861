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

#include "cnlm/core/token.h"

#include <cstddef>

namespace cnlm {
namespace {

// One decoded UTF-8 code point and the byte range it occupies.
struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

// Lenient decoder: invalid bytes decode as themselves so that arbitrary
// input never throws.
std::vector<CodePoint> Decode(std::string_view s) {
  std::vector<CodePoint> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xC0 && b0 < 0xE0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 < 0xF0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    }
    if (len > 1) {
      if (i + len > s.size()) {
        len = 1;
        cp = b0;
      } else {
        for (std::size_t k = 1; k < len; ++k) {
          const auto b = static_cast<unsigned char>(s[i + k]);
          if ((b & 0xC0) != 0x80) {
            len = 1;
            cp = b0;
            break;
          }
          cp = (cp << 6) | (b & 0x3F);
        }
      }
    }
    out.push_back({cp, i, i + len});
    i += len;
  }
  return out;
}

void Encode(char32_t cp, std::string *out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Unicode general category P* for ASCII, Latin-1 and the common
// punctuation blocks. ASCII symbols such as '$' or '+' are category S*
// and therefore not punctuation.
bool IsPunctCodePoint(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case '!': case '"': case '#': case '%': case '&': case '\'':
      case '(': case ')': case '*': case ',': case '-': case '.':
      case '/': case ':': case ';': case '?': case '@': case '[':
      case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF:
      return true;
    default:
      break;
  }
  if (c >= 0x2010 && c <= 0x2027) return true;  // dashes, quotes, ellipsis
  if (c >= 0x2030 && c <= 0x205E) return true;
  if (c >= 0x3001 && c <= 0x3003) return true;
  if (c >= 0x3008 && c <= 0x3011) return true;
  if (c >= 0xFF01 && c <= 0xFF0F) return c != 0xFF04 && c != 0xFF0B;
  return false;
}

bool IsAsciiDigit(char32_t c) { return c >= '0' && c <= '9'; }

bool IsAsciiLetter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Anything that is neither punctuation, whitespace nor an ASCII symbol
// counts as alphanumeric; this covers accented and non-Latin letters.
bool IsAlnumCodePoint(char32_t c) {
  if (c < 0x80) return IsAsciiDigit(c) || IsAsciiLetter(c);
  return !IsPunctCodePoint(c) && c != 0xA0;
}

// "p.m.", "u.s.": one letter followed by a period, at least twice.
bool IsLetterPeriodAcronym(const std::vector<CodePoint> &cps) {
  if (cps.size() < 4 || cps.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < cps.size(); i += 2) {
    if (!IsAlnumCodePoint(cps[i].value) || IsAsciiDigit(cps[i].value)) {
      return false;
    }
    if (cps[i + 1].value != '.') return false;
  }
  return true;
}

char32_t LowerCodePoint(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + ('a' - 'A');
  // Latin-1 supplement capitals, except the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  // Latin Extended-A pairs (even = upper) for the common range.
  if (c >= 0x100 && c <= 0x17F && c % 2 == 0 && c != 0x130 && c != 0x138) {
    return c + 1;
  }
  return c;
}

}  // namespace

bool IsSpecial(std::string_view token) {
  return token == kBos || token == kEos || token == kUnk ||
         token == kDigit || token == kPad || token == kDelete;
}

bool IsPunctuation(std::string_view token) {
  if (token.empty()) return false;
  for (const CodePoint &cp : Decode(token)) {
    if (!IsPunctCodePoint(cp.value)) return false;
  }
  return true;
}

Sentence StripPunctuation(const Sentence &tokens) {
  Sentence out;
  out.reserve(tokens.size());
  for (const Token &token : tokens) {
    if (IsSpecial(token)) {
      out.push_back(token);
      continue;
    }
    const std::vector<CodePoint> cps = Decode(token);
    if (IsLetterPeriodAcronym(cps)) {
      out.push_back(token);
      continue;
    }
    std::string kept;
    kept.reserve(token.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const char32_t c = cps[i].value;
      if (IsPunctCodePoint(c)) {
        const bool left = i > 0 && IsAlnumCodePoint(cps[i - 1].value);
        const bool right =
            i + 1 < cps.size() && IsAlnumCodePoint(cps[i + 1].value);
        if (!(left && right)) continue;
      }
      kept.append(token, cps[i].begin, cps[i].end - cps[i].begin);
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

Token NormalizeToken(std::string_view token) {
  if (IsSpecial(token)) return Token(token);
  const std::vector<CodePoint> cps = Decode(token);

  bool numeric = !cps.empty() && IsAsciiDigit(cps.front().value) &&
                 IsAsciiDigit(cps.back().value);
  for (std::size_t i = 0; numeric && i < cps.size(); ++i) {
    const char32_t c = cps[i].value;
    numeric = IsAsciiDigit(c) || c == ':' || c == ',' || c == '.';
  }
  if (numeric) return Token(kDigit);

  std::string out;
  out.reserve(token.size());
  for (const CodePoint &cp : cps) Encode(LowerCodePoint(cp.value), &out);
  return out;
}

Sentence NormalizeTokens(const Sentence &tokens) {
  Sentence out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(NormalizeToken(t));
  return out;
}

Sentence SplitTokens(std::string_view line) {
  Sentence out;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string JoinTokens(const Sentence &tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace cnlm
