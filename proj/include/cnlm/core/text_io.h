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

#ifndef CNLM_CORE_TEXT_IO_H_
#define CNLM_CORE_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cnlm/core/token.h"

namespace cnlm {

// Whole-file helpers. All throw Error on I/O failure.
std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view contents);

// One sentence per line, space-separated tokens. Blank lines are kept as
// empty sentences so that line numbers stay aligned with the file.
std::vector<Sentence> ParseCorpus(std::string_view text);
std::vector<Sentence> ReadCorpus(const std::filesystem::path &path);
std::string FormatCorpus(const std::vector<Sentence> &corpus);

// Lines without their terminators; a trailing newline adds no empty line.
std::vector<std::string_view> SplitLines(std::string_view text);

// Corpus preparation used for LM training and evaluation text:
// punctuation stripping, lowercasing/digit mapping and dropping of empty
// sentences.
std::vector<Sentence> PrepareText(const std::vector<Sentence> &corpus);

}  // namespace cnlm

#endif  // CNLM_CORE_TEXT_IO_H_
