// Copyright 2026 The Herald Authors
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

#ifndef HERALD_CLI_APP_H
#define HERALD_CLI_APP_H

#include <ostream>

namespace herald_cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point behind the `herald` binary:
///   herald run <scenario.json> [--seed N] [--shots N] [--out DIR] [--format csv|json]
///   herald sweep <scenario.json> [same flags]
///   herald describe <protocol>
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace herald_cli

#endif
