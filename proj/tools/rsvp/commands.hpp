// Copyright 2026 The rsvp Authors
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

#include <ostream>
#include <string>
#include <vector>

namespace rsvp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNonConvergence = 3,
  kSizeGuard = 4,
};

/// Runs one subcommand. args excludes the program name. CSV goes to --out
/// when given and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header rows of the CSV files, one per subcommand.
extern const std::vector<std::string> kRecoverHeader;
extern const std::vector<std::string> kEpsilonHeader;
extern const std::vector<std::string> kNoiseSweepHeader;
extern const std::vector<std::string> kRipHeader;

}  // namespace rsvp::cli
