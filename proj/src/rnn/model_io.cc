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

#include "cnlm/rnn/model_io.h"

#include <bit>
#include <cstring>

#include "cnlm/core/error.h"
#include "cnlm/core/text_io.h"

namespace cnlm {
namespace {

constexpr std::string_view kMagic("CNLMRNN\0", 8);

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

void PutU32(std::uint32_t v, std::string *out) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out->append(buf, 4);
}

void PutString(std::string_view s, std::string *out) {
  PutU32(static_cast<std::uint32_t>(s.size()), out);
  out->append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view Take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw ParseError("truncated model file", 0);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t U32() {
    std::uint32_t v;
    std::memcpy(&v, Take(4).data(), 4);
    return v;
  }
  std::string String() { return std::string(Take(U32())); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SaveRnnModel(const RnnModel &model) {
  const RnnParams<float> &p = model.params;
  if (model.vocab.size() != static_cast<std::size_t>(p.vocab_size())) {
    throw Error("vocabulary does not match the model");
  }
  std::string out(kMagic);
  PutU32(kRnnFormatVersion, &out);
  PutU32(static_cast<std::uint32_t>(p.hidden()), &out);
  PutU32(static_cast<std::uint32_t>(model.vocab.size()), &out);
  for (const Token &w : model.vocab.words()) PutString(w, &out);
  const auto tensors = p.tensors();
  PutU32(RnnParams<float>::kNumTensors, &out);
  for (int i = 0; i < RnnParams<float>::kNumTensors; ++i) {
    const auto &m = *tensors[i];
    PutString(RnnParams<float>::kNames[i], &out);
    const bool vector = m.cols() == 1;
    PutU32(vector ? 1 : 2, &out);
    PutU32(static_cast<std::uint32_t>(m.rows()), &out);
    if (!vector) PutU32(static_cast<std::uint32_t>(m.cols()), &out);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const float v = m(r, c);
        char buf[4];
        std::memcpy(buf, &v, 4);
        out.append(buf, 4);
      }
    }
  }
  return out;
}

RnnModel LoadRnnModel(std::string_view bytes) {
  Reader in(bytes);
  if (bytes.size() < kMagic.size() || in.Take(kMagic.size()) != kMagic) {
    throw ParseError("not a cnlm RNN model (bad magic)", 0);
  }
  const std::uint32_t version = in.U32();
  if (version != kRnnFormatVersion) {
    throw ParseError("unsupported model format version " + std::to_string(version), 0);
  }
  const std::uint32_t hidden = in.U32();
  const std::uint32_t vocab_size = in.U32();
  if (hidden == 0 || vocab_size < Vocabulary::kNumSpecial) {
    throw ParseError("implausible model dimensions", 0);
  }
  std::vector<Token> words;
  for (std::uint32_t i = 0; i < vocab_size; ++i) words.push_back(in.String());
  RnnModel model;
  model.vocab = Vocabulary(std::span<const Token>(words).subspan(Vocabulary::kNumSpecial));
  if (model.vocab.words() != words) throw ParseError("malformed model vocabulary", 0);
  model.params = RnnParams<float>::Zeros(static_cast<int>(vocab_size),
                                         static_cast<int>(hidden));

  if (in.U32() != RnnParams<float>::kNumTensors) {
    throw ParseError("unexpected number of tensors", 0);
  }
  auto tensors = model.params.tensors();
  for (int i = 0; i < RnnParams<float>::kNumTensors; ++i) {
    auto &m = *tensors[i];
    const std::string name = in.String();
    if (name != RnnParams<float>::kNames[i]) {
      throw ParseError("unexpected tensor '" + name + "'", 0);
    }
    const std::uint32_t rank = in.U32();
    if (rank < 1 || rank > 2) throw ParseError("bad rank for tensor " + name, 0);
    const std::uint32_t rows = in.U32();
    const std::uint32_t cols = rank == 2 ? in.U32() : 1;
    if (rows != m.rows() || cols != m.cols()) {
      throw ParseError("dimension mismatch for tensor " + name, 0);
    }
    const std::string_view payload = in.Take(std::size_t{rows} * cols * 4);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        float v;
        std::memcpy(&v, payload.data() + (std::size_t{r} * cols + c) * 4, 4);
        m(r, c) = v;
      }
    }
  }
  if (!in.done()) throw ParseError("trailing bytes after model payload", 0);
  return model;
}

void WriteRnnModel(const std::filesystem::path &path, const RnnModel &model) {
  WriteFile(path, SaveRnnModel(model));
}

RnnModel ReadRnnModel(const std::filesystem::path &path) {
  return LoadRnnModel(ReadFile(path));
}

}  // namespace cnlm
