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

#ifndef CNLM_CORE_FORMAT_H_
#define CNLM_CORE_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cnlm {

// Fixed-point rendering ("%.*f"); negative zero prints as positive zero so
// that golden files do not depend on rounding direction.
std::string FormatFixed(double value, int decimals);

// Strict parses: the whole field must be consumed.
std::optional<double> ParseDouble(std::string_view field);
std::optional<long long> ParseInt(std::string_view field);

std::vector<std::string_view> SplitOn(std::string_view text, char sep);

}  // namespace cnlm

#endif  // CNLM_CORE_FORMAT_H_
