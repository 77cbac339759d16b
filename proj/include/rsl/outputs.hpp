// Copyright 2026 The RSL Authors
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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rsl/bounds.hpp"

namespace rsl {

inline constexpr std::string_view kCsvHeader =
    "tau,dM,dS,T_M,T_tilde,T_qsl,T_g,T_d,x_M,x_tilde,epsilon,grid_points";

/// %.12e, with "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double value);

std::string results_csv(std::span<const BoundReport> reports);

/// Inverse of results_csv for the numeric fields. Diagnostics are not stored
/// in the CSV and come back empty.
std::vector<BoundReport> parse_results_csv(std::string_view text);

/// Reports under "reports" (absent bounds are null, infinite ones the string
/// "inf") and the configuration that produced them under "config".
nlohmann::json results_json(std::span<const BoundReport> reports, const nlohmann::json& config);

/// Bounds against tau on linear axes, with the line T = tau.
std::string bounds_svg(std::span<const BoundReport> reports, std::string_view title = {});

/// $RSL_OUTPUT_DIR if set and non-empty, otherwise `configured`.
std::filesystem::path resolve_output_dir(const std::string& configured);

/// Writes results.csv, results.json and bounds.svg into `dir`, creating it if
/// needed. Throws std::runtime_error when a file cannot be written.
void emit_outputs(std::span<const BoundReport> reports, const nlohmann::json& config,
                  const std::filesystem::path& dir);

}  // namespace rsl
