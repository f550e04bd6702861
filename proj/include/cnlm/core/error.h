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

#ifndef CNLM_CORE_ERROR_H_
#define CNLM_CORE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnlm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// NaN/Inf where a finite value is required, or an impossible probability.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid confusion network or model.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cnlm

#endif  // CNLM_CORE_ERROR_H_
