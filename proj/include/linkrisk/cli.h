// Copyright 2026 The linkrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKRISK_CLI_H_
#define LINKRISK_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace linkrisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one `linkrisk` command line. args[0] is the program name.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);
int Dispatch(int argc, char** argv);

// Expands `--config <file>` (or `--config=<file>`): each `key=value` line
// becomes `--key=value` unless `--key` is already on the command line.
// Blank lines and lines starting with '#' are ignored. Returns false and
// sets `error` when the file cannot be read or a line is malformed.
bool ExpandConfig(std::vector<std::string>& args, std::string& error);

}  // namespace linkrisk::cli

#endif  // LINKRISK_CLI_H_
