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

// Speed-limit evaluators over a sampled trajectory. Every bound is a ratio
//
//     |numerator| / <|rate(t)|>_t
//
// of a change in some relative-entropy quantity and the time average of the
// corresponding instantaneous rate. An infinite result is an explicit
// sentinel (std::numeric_limits<double>::infinity()); the *_detail variants
// say why.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsl/dynamics.hpp"
#include "rsl/qcore.hpp"
#include "rsl/resources.hpp"

namespace rsl {

inline constexpr double kInfiniteBound = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultEpsilon = 1e-6;

/// (1/tau) * integral of |f| by the composite trapezoid rule on `times`.
double time_average(std::span<const double> samples, std::span<const double> times);

/// (1/tau) * sum_i w_i |f_i| with the grid's quadrature weights.
double time_average(std::span<const double> samples, const TimeGrid& grid);

struct BoundDetail {
  double time = 0.0;
  /// Resource-measure change (or Delta M + Delta S) in the numerator, signed.
  double change = 0.0;
  /// Which endpoint's closest free state was used: 0 or tau.
  double selector = 0.0;
  /// Almost-free regularization parameter actually used (0 if none).
  double epsilon_used = 0.0;
  std::string diagnostic;
};

/// Resource speed limit with the entropy-rate penalty in the denominator.
BoundDetail bound_TM_detail(const Trajectory& traj, const FreeStateOracle& oracle,
                            double floor = kDefaultLogFloor);
double bound_TM(const Trajectory& traj, const FreeStateOracle& oracle,
                double floor = kDefaultLogFloor);

/// Resource speed limit with the entropy change in the numerator. When the
/// selected closest free state is singular, or the quotient is 0/0, the free
/// states are replaced by almost-free states and the eps -> 0 limit is
/// extrapolated from {eps, eps/2, eps/4}. eps = 0 disables this.
BoundDetail bound_Ttilde_detail(const Trajectory& traj, const FreeStateOracle& oracle,
                                double epsilon = kDefaultEpsilon,
                                double floor = kDefaultLogFloor);
double bound_Ttilde(const Trajectory& traj, const FreeStateOracle& oracle,
                    double epsilon = kDefaultEpsilon, double floor = kDefaultLogFloor);

/// Generation bound from the free state sigma = rho_0. Throws
/// PreconditionViolation if the trajectory does not start at sigma.
double bound_Tg(const Trajectory& traj, const DensityMatrixd& sigma,
                double floor = kDefaultLogFloor);

/// Degradation bound towards sigma (typically sigma = rho_tau).
BoundDetail bound_Td_detail(const Trajectory& traj, const DensityMatrixd& sigma,
                            double floor = kDefaultLogFloor);
double bound_Td(const Trajectory& traj, const DensityMatrixd& sigma,
                double floor = kDefaultLogFloor);

/// Relative-entropy quantum speed limit, max{T(rho_0, rho_tau), T(rho_tau, rho_0)}.
/// A direction whose relative entropy is infinite is left out of the max.
BoundDetail bound_qsl_detail(const Trajectory& traj, double floor = kDefaultLogFloor,
                             double epsilon = kDefaultEpsilon);
double bound_qsl(const Trajectory& traj, double floor = kDefaultLogFloor,
                 double epsilon = kDefaultEpsilon);

/// Which single-free-state corollaries to evaluate alongside the RSLs.
enum class Framing { None, Generation, Degradation, Both };

struct BoundOptions {
  double floor = kDefaultLogFloor;
  double epsilon = kDefaultEpsilon;
  Framing framing = Framing::None;
};

struct BoundReport {
  double tau = 0.0;
  double delta_M = 0.0;
  double delta_S = 0.0;
  double T_M = 0.0;
  double T_tilde = 0.0;
  double T_qsl = 0.0;
  std::optional<double> T_g;
  std::optional<double> T_d;
  double x_M = 0.0;
  double x_tilde = 0.0;
  double epsilon_used = 0.0;
  std::size_t quadrature_points = 0;
  std::vector<std::string> diagnostics;
};

/// All bounds for one trajectory. Generation uses sigma = rho_0 and
/// degradation uses sigma = rho_tau.
BoundReport evaluate_bounds(const Trajectory& traj, const FreeStateOracle& oracle,
                            const BoundOptions& options = {});

struct MinTimeResult {
  double T_mu = kInfiniteBound;
  std::optional<DensityMatrixd> initial;
  std::optional<DensityMatrixd> final;
  double duration = 0.0;  // time at which Delta M = mu was reached
  std::size_t family_index = 0;
};

inline constexpr double kMuTolerance = 1e-3;

/// Minimum of T_M over initial states in `family` and durations in
/// (0, tau_max] subject to Delta M = mu (within kMuTolerance). Each initial
/// state is scanned on `scan_points` uniform times; the first bracket that
/// reaches mu is refined by bisection. T_M is then evaluated on [0, t_hit]
/// with `grid`.
MinTimeResult min_time_mu(const ChannelSpec& channel, const FreeStateOracle& oracle,
                          std::span<const DensityMatrixd> family, double mu, double tau_max,
                          std::size_t scan_points = 2001, const GridOptions& grid = {},
                          double floor = kDefaultLogFloor);

}  // namespace rsl
