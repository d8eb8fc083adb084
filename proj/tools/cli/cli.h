// tools/cli/cli.h

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CABKWS_TOOLS_CLI_CLI_H_
#define CABKWS_TOOLS_CLI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace cabkws::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one cabkws command. args excludes the program name. Results go to out,
// diagnostics to err. Returns the process exit code: 0 on success, 1 on a
// runtime failure, 2 on a usage or configuration error.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "runs/<UTC timestamp>-seed<seed>".
std::string DefaultRunDir(unsigned long long seed);

}  // namespace cabkws::cli

#endif  // CABKWS_TOOLS_CLI_CLI_H_
