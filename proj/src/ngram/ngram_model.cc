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

#include "cnlm/ngram/ngram_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cnlm/core/error.h"
#include "cnlm/core/format.h"
#include "cnlm/core/text_io.h"

namespace cnlm {
namespace {

constexpr double kLn10 = std::numbers::ln10;

std::string JoinGram(const NGram &gram, const Vocabulary &vocab) {
  std::string out;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i > 0) out += ' ';
    out += vocab.Word(gram[i]);
  }
  return out;
}

}  // namespace

std::size_t NGramHash::operator()(const NGram &gram) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (TokenId id : gram) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(id));
    h *= 1099511628211ULL;
  }
  return h;
}

NGramModel::NGramModel(int order, Vocabulary vocab)
    : order_(order), vocab_(std::move(vocab)) {
  if (order < 1) throw Error("n-gram order must be >= 1");
  tables_.resize(static_cast<std::size_t>(order));
}

void NGramModel::Set(const NGram &gram, const NGramEntry &entry) {
  if (gram.empty() || gram.size() > tables_.size()) {
    throw Error("n-gram length out of range");
  }
  tables_[gram.size() - 1][gram] = entry;
}

const NGramEntry *NGramModel::Find(const NGram &gram) const {
  if (gram.empty() || gram.size() > tables_.size()) return nullptr;
  const NGramTable &t = tables_[gram.size() - 1];
  auto it = t.find(gram);
  return it == t.end() ? nullptr : &it->second;
}

NGramEntry *NGramModel::MutableFind(const NGram &gram) {
  if (gram.empty() || gram.size() > tables_.size()) return nullptr;
  NGramTable &t = tables_[gram.size() - 1];
  auto it = t.find(gram);
  return it == t.end() ? nullptr : &it->second;
}

const NGramTable &NGramModel::entries(int n) const {
  if (n < 1 || n > order_) throw Error("n-gram length out of range");
  return tables_[static_cast<std::size_t>(n - 1)];
}

double NGramModel::LogProb(std::span<const TokenId> context,
                           TokenId word) const {
  const std::size_t len =
      std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  std::span<const TokenId> ctx = context.last(len);
  double bow = 0.0;
  NGram gram;
  for (std::size_t k = len + 1; k-- > 0;) {
    // Try the (k+1)-gram ctx[len-k..] word.
    gram.assign(ctx.end() - static_cast<std::ptrdiff_t>(k), ctx.end());
    gram.push_back(word);
    if (const NGramEntry *e = Find(gram)) return (bow + e->log10_prob) * kLn10;
    if (k == 0) break;
    gram.pop_back();
    if (const NGramEntry *c = Find(gram)) bow += c->log10_bow;
  }
  return -std::numeric_limits<double>::infinity();
}

std::vector<TokenId> NGramModel::PredictableWords() const {
  std::vector<TokenId> out;
  for (TokenId id = 0; id < static_cast<TokenId>(vocab_.size()); ++id) {
    if (id == Vocabulary::kBosId || id == Vocabulary::kPadId ||
        id == Vocabulary::kDeleteId) {
      continue;
    }
    out.push_back(id);
  }
  return out;
}

std::string WriteArpa(const NGramModel &model) {
  const Vocabulary &vocab = model.vocab();
  std::string out = "\n\\data\\\n";
  for (int n = 1; n <= model.order(); ++n) {
    out += "ngram " + std::to_string(n) + "=" +
           std::to_string(model.entries(n).size()) + "\n";
  }
  for (int n = 1; n <= model.order(); ++n) {
    out += "\n\\" + std::to_string(n) + "-grams:\n";
    std::vector<std::pair<std::string, const NGramEntry *>> rows;
    for (const auto &[gram, entry] : model.entries(n)) {
      rows.emplace_back(JoinGram(gram, vocab), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (const auto &[words, e] : rows) {
      out += FormatFixed(e->log10_prob, 6);
      out += '\t';
      out += words;
      if (n < model.order()) {
        out += '\t';
        out += FormatFixed(e->log10_bow, 6);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel ReadArpa(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  std::size_t i = 0;
  const auto skip_blank = [&] {
    while (i < lines.size() && SplitTokens(lines[i]).empty()) ++i;
  };
  skip_blank();
  if (i >= lines.size() || lines[i] != "\\data\\") {
    throw ParseError("expected \\data\\", i + 1);
  }
  ++i;
  std::vector<std::size_t> declared;
  while (i < lines.size() && lines[i].starts_with("ngram ")) {
    const std::string_view count_line = lines[i].substr(6);
    const std::size_t eq = count_line.find('=');
    const auto n = eq == std::string_view::npos ? std::nullopt : ParseInt(count_line.substr(0, eq));
    const auto c = eq == std::string_view::npos ? std::nullopt : ParseInt(count_line.substr(eq + 1));
    if (!n || !c || *n != static_cast<long long>(declared.size()) + 1 || *c < 0) {
      throw ParseError("malformed ngram count line", i + 1);
    }
    declared.push_back(static_cast<std::size_t>(*c));
    ++i;
  }
  if (declared.empty()) throw ParseError("no ngram counts in \\data\\", i + 1);
  const int order = static_cast<int>(declared.size());

  struct Row {
    std::vector<std::string> words;
    NGramEntry entry;
  };
  std::vector<std::vector<Row>> sections(declared.size());
  std::vector<std::size_t> section_line(declared.size());
  for (int n = 1; n <= order; ++n) {
    skip_blank();
    const std::string header = "\\" + std::to_string(n) + "-grams:";
    if (i >= lines.size() || lines[i] != header) {
      throw ParseError("expected " + header, i + 1);
    }
    section_line[static_cast<std::size_t>(n - 1)] = i + 1;
    ++i;
    for (; i < lines.size(); ++i) {
      const std::string_view line = lines[i];
      if (SplitTokens(line).empty()) continue;
      if (line.starts_with("\\")) break;
      const std::vector<std::string_view> fields = SplitOn(line, '\t');
      const std::size_t want = n < order ? 3 : 2;
      if (fields.size() != want && !(n < order && fields.size() == 2)) {
        throw ParseError("expected " + std::to_string(want) + " tab-separated fields",
                         i + 1);
      }
      Row row;
      const auto lp = ParseDouble(fields[0]);
      if (!lp) throw ParseError("bad log-probability", i + 1);
      row.entry.log10_prob = *lp;
      if (fields.size() == 3) {
        const auto bow = ParseDouble(fields[2]);
        if (!bow) throw ParseError("bad backoff weight", i + 1);
        row.entry.log10_bow = *bow;
      }
      row.words = SplitTokens(fields[1]);
      if (row.words.size() != static_cast<std::size_t>(n)) {
        throw ParseError("expected " + std::to_string(n) + " tokens", i + 1);
      }
      sections[static_cast<std::size_t>(n - 1)].push_back(std::move(row));
    }
    if (sections[static_cast<std::size_t>(n - 1)].size() !=
        declared[static_cast<std::size_t>(n - 1)]) {
      throw ParseError(std::to_string(n) + "-gram count differs from \\data\\",
                       section_line[static_cast<std::size_t>(n - 1)]);
    }
  }
  skip_blank();
  if (i >= lines.size() || lines[i] != "\\end\\") {
    throw ParseError("expected \\end\\", i + 1);
  }

  std::vector<Token> words;
  for (const Row &row : sections[0]) words.push_back(row.words[0]);
  NGramModel model(order, Vocabulary(words));
  for (int n = 1; n <= order; ++n) {
    for (const Row &row : sections[static_cast<std::size_t>(n - 1)]) {
      NGram gram;
      for (const Token &w : row.words) {
        const auto id = model.vocab().Find(w);
        if (!id) {
          throw ParseError("token '" + w + "' missing from 1-grams",
                           section_line[static_cast<std::size_t>(n - 1)]);
        }
        gram.push_back(*id);
      }
      model.Set(gram, row.entry);
    }
  }
  return model;
}

PerplexityResult NGramPerplexity(const NGramModel &model,
                                 std::span<const Sentence> corpus) {
  const Vocabulary &vocab = model.vocab();
  double nll = 0.0;
  std::size_t tokens = 0;
  std::vector<TokenId> ids;
  for (const Sentence &s : corpus) {
    ids.assign(1, Vocabulary::kBosId);
    for (const Token &t : s) ids.push_back(vocab.At(t));
    ids.push_back(Vocabulary::kEosId);
    for (std::size_t t = 1; t < ids.size(); ++t) {
      const double lp =
          model.LogProb(std::span<const TokenId>(ids.data(), t), ids[t]);
      if (!std::isfinite(lp)) {
        throw NumericError("zero probability for '" + vocab.Word(ids[t]) + "'");
      }
      nll -= lp;
      ++tokens;
    }
  }
  return MakePerplexity(nll, tokens, corpus.size());
}

}  // namespace cnlm
