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

#ifndef UGSIM_CLI_H_
#define UGSIM_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace ugsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

// Entry point behind the `ugsim` binary. `args` excludes the program name.
// Returns 0 on success, 1 on validation or configuration errors, 2 on
// backend or I/O failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ugsim

#endif  // UGSIM_CLI_H_
