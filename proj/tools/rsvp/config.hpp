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

#include <string>
#include <vector>

namespace rsvp::cli {

/// Flat key=value config files. Each line becomes "--key value..." tokens;
/// blank lines and lines starting with '#' are skipped. A value of true or
/// false on key k becomes "--k" or "--no-k".
std::vector<std::string> read_config_tokens(const std::string& path);

/// Replaces every "--config <path>" (or "--config=<path>") pair with the
/// file's tokens, placed directly after the subcommand so that explicit
/// command-line flags still win.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace rsvp::cli
