/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The tokcom authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tokcom/sweep.hpp"

namespace tokcom {

/// "a:step:b" (inclusive), a comma list, or a single value. "inf" means
/// noiseless. Throws ConfigError.
std::vector<double> parse_snr_points(std::string_view text);

/// Comma list of values in [0, 1]. Throws ConfigError.
std::vector<double> parse_levels(std::string_view text);

SourceKind parse_source_kind(std::string_view text);
std::string source_kind_name(SourceKind kind);
SnrConvention parse_snr_convention(std::string_view text);
FallbackPolicy parse_fallback(std::string_view text);
CheckNodeRule parse_check_node(std::string_view text);

/// Overlays the keys present in `j` on `cfg`. Unknown keys are rejected.
/// Throws ConfigError.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

/// Reads a JSON run configuration file. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads a whole text file, trailing newline stripped. Throws ConfigError.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tokcom
