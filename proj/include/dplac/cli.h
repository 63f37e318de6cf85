// Copyright 2026 The DP-LAC Simulator Authors
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

#ifndef DPLAC_CLI_H_
#define DPLAC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dplac {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Entry point of the `dplac` tool. `args` excludes the program name.
// Subcommands: run, accountant, partition, sweep, plotdata.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dplac

#endif  // DPLAC_CLI_H_
