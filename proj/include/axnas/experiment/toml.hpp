// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <string>

#include <json.hpp>

namespace axnas::experiment {

/// Parses the TOML subset used by run configs into JSON: [table] and
/// [dotted.table] headers, `key = value` with strings, booleans, integers,
/// floats, and single-line arrays of those; `#` comments.
/// Throws ConfigError with the line number on anything else.
nlohmann::json parse_toml(const std::string& text, const std::string& source = "<toml>");

}  // namespace axnas::experiment
