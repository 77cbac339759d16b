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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsl/qcore.hpp"

namespace rsl {

enum class ChannelKind {
  Dephasing,
  DephasingNonMonotonic,
  Depolarising,
  DepolarisingNonMonotonic,
  Thermal,
};

/// Time dependence of the non-monotonic decay exponent Gamma(t).
///   Oscillating: gamma * t + sin^2(k t) / k   (rate gamma + sin 2kt, can be negative)
///   Printed:     gamma * (t + sin^2(k t) / k) (rate gamma (1 + sin 2kt) >= 0)
enum class Modulation { Oscillating, Printed };

/// Mean bath occupation of the thermal channel.
///   DetailedBalance: N = 1 / (exp(2 beta omega) - 1), Gibbs state is stationary
///   AsWritten:       N = 1 / (exp(2 omega / beta) - 1)
enum class ThermalOccupation { DetailedBalance, AsWritten };

/// Sign of the anticommutator in the thermal dissipator. Only Standard is
/// trace preserving; AsPrinted exists to show the integrator rejecting it.
enum class DissipatorSign { Standard, AsPrinted };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Dephasing;
  double gamma = 1.0;
  double k = 0.0;      // non-monotonic variants
  double omega = 0.0;  // thermal
  double beta = 0.0;   // thermal
  Modulation modulation = Modulation::Oscillating;
  ThermalOccupation occupation = ThermalOccupation::DetailedBalance;
  DissipatorSign dissipator = DissipatorSign::Standard;

  static ChannelSpec dephasing(double gamma);
  static ChannelSpec dephasing_non_monotonic(double gamma, double k);
  static ChannelSpec depolarising(double gamma);
  static ChannelSpec depolarising_non_monotonic(double gamma, double k);
  static ChannelSpec thermal(double omega, double gamma, double beta);

  bool non_monotonic() const;
  bool is_dephasing() const;
  bool is_depolarising() const;
  bool is_thermal() const { return kind == ChannelKind::Thermal; }

  /// Throws std::invalid_argument on gamma <= 0, k <= gamma for the
  /// non-monotonic variants, or non-positive omega/beta for Thermal.
  void validate() const;
};

std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view name);

/// Gamma(t): nu(t) = exp(-Gamma(t)) for dephasing, e^{-Gamma} is the
/// surviving weight of rho_0 for depolarising.
double decay_exponent(const ChannelSpec& channel, double t);
/// dGamma/dt.
double decay_rate(const ChannelSpec& channel, double t);

double thermal_occupation(const ChannelSpec& channel);

/// Right-hand side of the thermal Lindblad equation at rho.
ComplexMatrixd thermal_generator(const ChannelSpec& channel, const ComplexMatrixd& rho);

enum class GridSpacing { Uniform, Graded };
enum class QuadratureRule { Trapezoid, Simpson };

struct GridOptions {
  std::size_t points = 1001;
  /// Graded: t_i = tau * s_i^2 with s uniform on [0, 1]. Clusters points near
  /// t = 0 where the entropy rate of a rank-deficient initial state diverges.
  GridSpacing spacing = GridSpacing::Graded;
  QuadratureRule rule = QuadratureRule::Simpson;
  /// RK4 steps per grid interval for the thermal channel.
  std::size_t substeps = 10;
};

/// Strictly increasing times on [0, tau] with quadrature weights summing to tau.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(std::vector<double> times, std::vector<double> weights);

  static TimeGrid make(double tau, const GridOptions& options = {});

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return times_.size(); }
  double duration() const { return times_.empty() ? 0.0 : times_.back(); }

  /// Grids built by make() are images t(s) of a uniform parameter grid with
  /// step `parameter_step()`; `jacobian()` holds dt/ds at the nodes. Empty
  /// for grids given as explicit times and weights.
  std::optional<QuadratureRule> rule() const { return rule_; }
  double parameter_step() const { return step_; }
  const std::vector<double>& jacobian() const { return jacobian_; }

 private:
  std::vector<double> times_;
  std::vector<double> weights_;
  std::optional<QuadratureRule> rule_;
  double step_ = 0.0;
  std::vector<double> jacobian_;
};

struct Trajectory {
  std::optional<ChannelSpec> channel;  // empty for tabulated test dynamics
  TimeGrid grid;
  std::vector<DensityMatrixd> states;
  std::vector<HermitianOperatord> derivatives;

  double duration() const { return grid.duration(); }
  const DensityMatrixd& initial() const { return states.front(); }
  const DensityMatrixd& final() const { return states.back(); }
  std::size_t size() const { return states.size(); }
};

DensityMatrixd state_at(const ChannelSpec& channel, const DensityMatrixd& rho0, double t);

/// d/dt state_at(channel, rho0, t); traceless.
HermitianOperatord liouvillian_at(const ChannelSpec& channel, const DensityMatrixd& rho0,
                                  double t);

/// Fixed-step RK4 on the thermal Lindblad equation over a uniform grid of
/// `steps` intervals (one RK4 step each). Requires steps >= 100.
Trajectory integrate_lindblad(const ChannelSpec& channel, const DensityMatrixd& rho0,
                              double tau, std::size_t steps);

/// RK4 on an arbitrary grid with `substeps` equal steps per interval.
Trajectory integrate_lindblad(const ChannelSpec& channel, const DensityMatrixd& rho0,
                              const TimeGrid& grid, std::size_t substeps);

/// Trajectory on [0, tau]: exact evaluation for the analytic channels, RK4 for
/// Thermal.
Trajectory make_trajectory(const ChannelSpec& channel, const DensityMatrixd& rho0,
                           double tau, const GridOptions& options = {});

/// Trajectory from an arbitrary t -> (rho_t, drho_t/dt) map, e.g. unitary
/// dynamics in tests.
using StateDerivativeFn = std::function<std::pair<ComplexMatrixd, ComplexMatrixd>(double)>;
Trajectory tabulate_trajectory(const TimeGrid& grid, const StateDerivativeFn& eval,
                               std::vector<Index> local_dims = {});

/// -Tr[L log rho], the instantaneous entropy production rate.
double entropy_rate(const DensityMatrixd& rho, const HermitianOperatord& derivative,
                    double floor = kDefaultLogFloor);

}  // namespace rsl
