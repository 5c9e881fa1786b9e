// Copyright 2026 The ugsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UGSIM_STRINGS_H_
#define UGSIM_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace ugsim {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);

// Shortest decimal form with at least one fractional digit: 0 -> "0.0",
// 0.5 -> "0.5", 2 -> "2.0".
std::string format_temperature(double t);

// Round-trippable decimal form of a double.
std::string format_double(double v);

// Current UTC time as ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace ugsim

#endif  // UGSIM_STRINGS_H_
