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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsl/qcore.hpp"

namespace rsl {

enum class FreeStateKind { Incoherent, WernerSeparable, Gibbs, FixedState };

std::string_view to_string(FreeStateKind kind);

/// A resource theory identified by its free states, able to return the free
/// state closest (in relative entropy) to a given state.
///
///  - Incoherent: diagonal states in the computational basis; the closest
///    free state is the dephased input.
///  - WernerSeparable: separable two-qubit states, restricted to the Werner /
///    X-state family (diagonal plus a |00><11| coherence). The closest free
///    state is taken to be the dephased input; separable_search measures how
///    far that is from the true minimum.
///  - Gibbs: athermality of a qubit with H = omega sigma_z; the single free
///    state exp(-beta H)/Z.
///  - FixedState: any theory with a single free state sigma.
class FreeStateOracle {
 public:
  static FreeStateOracle incoherent();
  static FreeStateOracle werner_separable();
  static FreeStateOracle gibbs(double omega, double beta);
  static FreeStateOracle fixed(DensityMatrixd sigma);

  FreeStateKind kind() const { return kind_; }
  /// The unique free state for Gibbs and FixedState.
  const std::optional<DensityMatrixd>& free_state() const { return free_state_; }

  /// Whether `rho` lies in the oracle's declared domain.
  bool supports(const DensityMatrixd& rho) const;

  /// Whether singular closest states should be regularized along
  /// |00><11| + |11><00| (two-qubit Werner family) rather than by
  /// eigenvalue flooring.
  bool werner_direction(const DensityMatrixd& rho) const;

  std::string name() const;

 private:
  FreeStateOracle(FreeStateKind kind, std::optional<DensityMatrixd> state)
      : kind_(kind), free_state_(std::move(state)) {}

  FreeStateKind kind_;
  std::optional<DensityMatrixd> free_state_;
};

/// Two-qubit state whose only non-zero off-diagonal entries are <00|rho|11>
/// and its conjugate (within tol).
bool in_werner_family(const DensityMatrixd& rho, double tol = 1e-10);

/// Throws UnsupportedState for WernerSeparable on out-of-family input, and
/// DimensionMismatch when a single-free-state theory has another dimension.
DensityMatrixd closest_free(const FreeStateOracle& oracle, const DensityMatrixd& rho);

/// Relative entropy of rho to its closest free state, in nats.
double resource_measure(const FreeStateOracle& oracle, const DensityMatrixd& rho,
                        double floor = kDefaultLogFloor);

struct SearchConfig {
  std::size_t restarts = 6;
  std::size_t iterations = 400;
  std::size_t mixture_size = 16;
  /// Stop once the Frank-Wolfe duality gap falls below this.
  double tolerance = 1e-7;
  std::uint64_t seed = 0;

  void validate(Index dim) const;
};

struct SearchResult {
  DensityMatrixd sigma;
  /// S(rho || sigma) for the returned separable sigma: an upper bound on the
  /// relative entropy of entanglement.
  double value = 0.0;
  /// Duality gap at the returned point; value - gap is a lower bound on the
  /// minimum over the convex hull of product states.
  double gap = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Minimizes S(rho || sigma) over two-qubit separable sigma by conditional
/// gradient (pairwise Frank-Wolfe) on mixtures of product pure states.
SearchResult separable_search(const DensityMatrixd& rho, const SearchConfig& config = {});

}  // namespace rsl
