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

// Self-verification suite: the reference parameter sets with their expected
// bound hierarchies, a randomized validity sweep, numerical cross-checks and
// the separable-search comparison.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rsl/dynamics.hpp"

namespace rsl {

enum class VerifyLevel { Fast, Full };

VerifyLevel verify_level_from_string(std::string_view name);

/// Model conventions under test. The defaults are the ones the library
/// ships with; changing them lets a test confirm that the suite catches a
/// wrong convention.
struct Conventions {
  DissipatorSign dissipator = DissipatorSign::Standard;
  ThermalOccupation occupation = ThermalOccupation::DetailedBalance;
  Modulation modulation = Modulation::Oscillating;
  GridOptions grid = {};
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  /// Measured values against their tolerances, one line each.
  std::vector<std::string> details;
};

/// Checks 1-5 and 7 at Fast; Full adds the randomized sweep (6) and the
/// separable search (8). Checks never throw; an exception is a failure.
std::vector<CheckResult> run_checks(VerifyLevel level, const Conventions& conventions = {});

/// Runs the checks, prints one PASS/FAIL line per check followed by its
/// details, and returns 0 iff everything passed.
int verify_suite(VerifyLevel level, std::ostream& out, const Conventions& conventions = {});

}  // namespace rsl
