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
// Binary model container:
//
//   "CNLMRNN\0"  u32 version  u32 hidden
//   u32 vocab_size, then per word: u32 length, bytes
//   u32 tensor_count, then per tensor: u32 name length, name, u32 rank,
//   u32 dims[rank], row-major float32 values
//
// All integers and floats are little-endian.

#ifndef CNLM_RNN_MODEL_IO_H_
#define CNLM_RNN_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "cnlm/rnn/rnn_lm.h"

namespace cnlm {

inline constexpr std::uint32_t kRnnFormatVersion = 1;

std::string SaveRnnModel(const RnnModel &model);
// Throws ParseError on a wrong magic or version, truncation, unexpected
// tensors or dimensions, or trailing bytes.
RnnModel LoadRnnModel(std::string_view bytes);

void WriteRnnModel(const std::filesystem::path &path, const RnnModel &model);
RnnModel ReadRnnModel(const std::filesystem::path &path);

}  // namespace cnlm

#endif  // CNLM_RNN_MODEL_IO_H_
