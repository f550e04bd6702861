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

#include "cnlm/core/text_io.h"

#include <fstream>
#include <sstream>

#include "cnlm/core/error.h"

namespace cnlm {

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<Sentence> ParseCorpus(std::string_view text) {
  std::vector<Sentence> corpus;
  for (std::string_view line : SplitLines(text)) {
    corpus.push_back(SplitTokens(line));
  }
  return corpus;
}

std::vector<Sentence> ReadCorpus(const std::filesystem::path &path) {
  return ParseCorpus(ReadFile(path));
}

std::string FormatCorpus(const std::vector<Sentence> &corpus) {
  std::string out;
  for (const Sentence &s : corpus) {
    out += JoinTokens(s);
    out += '\n';
  }
  return out;
}

std::vector<Sentence> PrepareText(const std::vector<Sentence> &corpus) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const Sentence &s : corpus) {
    Sentence t = NormalizeTokens(StripPunctuation(s));
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace cnlm
