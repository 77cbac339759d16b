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

// Scenario configuration for the command-line runner. A configuration is a
// flat JSON object; see README.md for the keys.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rsl/bounds.hpp"
#include "rsl/dynamics.hpp"
#include "rsl/resources.hpp"

namespace rsl {

struct ScenarioConfig {
  std::string scenario;
  /// Channel used by scenario "custom"; named scenarios fix it.
  std::optional<std::string> channel;
  double gamma = 1.0;
  std::optional<double> k;
  std::optional<double> p;
  std::optional<double> omega;
  std::optional<double> beta;
  /// werner(p) | bell | plus-y | diag(a,b,...) | random | matrix literal.
  nlohmann::json initial_state;
  /// incoherent | werner-separable | gibbs. Empty picks the scenario default.
  std::string oracle;
  std::vector<double> tau_list;
  std::size_t grid_points = 1001;
  double epsilon = kDefaultEpsilon;
  double floor = kDefaultLogFloor;
  std::string output_dir = "results";
  std::uint64_t seed = 0;
  Modulation modulation = Modulation::Oscillating;
  ThermalOccupation occupation = ThermalOccupation::DetailedBalance;
  GridSpacing spacing = GridSpacing::Graded;
  QuadratureRule quadrature = QuadratureRule::Simpson;
  std::size_t substeps = 10;
  Framing framing = Framing::None;

  /// Parses and validates. Throws ConfigError naming the offending key.
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  ChannelSpec channel_spec() const;
  DensityMatrixd initial() const;
  FreeStateOracle free_state_oracle() const;
  GridOptions grid_options() const;
  BoundOptions bound_options() const;
};

/// Every key accepted by ScenarioConfig::from_json.
const std::vector<std::string>& config_keys();

/// Sets `key` in a raw config from a command-line string. Values that parse
/// as JSON are taken as such, comma-separated lists become arrays, anything
/// else is a string.
void apply_override(nlohmann::json& config, const std::string& key, const std::string& value);

/// Parses an initial-state descriptor, e.g. "werner(0.5)" or "diag(0.9,0.1)".
DensityMatrixd parse_initial_state(const nlohmann::json& descriptor, std::uint64_t seed = 0);

/// One BoundReport per entry of tau_list, in order. Durations are evaluated
/// concurrently.
std::vector<BoundReport> run_scenario(const ScenarioConfig& config);

/// Cartesian product of `axes` applied to `base`, in lexicographic order of
/// the axis values as given (first axis varies slowest).
std::vector<nlohmann::json> expand_sweep(const nlohmann::json& base,
                                         const std::map<std::string, std::vector<nlohmann::json>>& axes);

}  // namespace rsl
