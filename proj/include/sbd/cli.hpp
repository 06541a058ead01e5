// Copyright 2026 The sbd Authors.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sbd::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes.
enum ExitCode : int { kOk = 0, kBadArgs = 2, kNumerical = 3, kIo = 4 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "SBD_OUT_DIR";

/// Runs `sbd <args...>` (args excludes the program name). Subcommands:
/// synth, deconvolve, bounds, bench, riesz, replay.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sbd::cli
