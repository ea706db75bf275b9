// SPDX-License-Identifier: Apache-2.0
//
// omnisim: simulator and optimizer for intelligent omni-surface assisted links
// Copyright (C) 2026 The omnisim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OMNISIM_CLI_HPP
#define OMNISIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace omnisim::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitGuard = 4;

/// Runs one subcommand (simulate, pattern, coverage, linkbudget, oracle).
/// `args` excludes the program name. Failures print a one-line JSON object
/// {"error", "kind", "message", "exit_code"} to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace omnisim::cli

#endif
