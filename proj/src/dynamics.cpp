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

#include "rsl/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsl/states.hpp"

namespace rsl {

namespace {

// RK4 steps used by state_at for the thermal channel. Fixed so that the
// numerical solution is a smooth function of t.
constexpr std::size_t kThermalStateSteps = 4000;

constexpr double kTraceDrift = 1e-9;
constexpr double kNegativeEigenvalue = -1e-8;

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("time must be finite and non-negative");
  }
}

void check_compatible(const ChannelSpec& channel, const DensityMatrixd& rho0) {
  channel.validate();
  if (channel.is_thermal() && rho0.dim() != 2) {
    throw DimensionMismatch("thermal channel acts on a single qubit (dim 2), got dim " +
                            std::to_string(rho0.dim()));
  }
}

ComplexMatrixd off_diagonal(const ComplexMatrixd& m) {
  ComplexMatrixd out = m;
  out.diagonal().setZero();
  return out;
}

DensityMatrixd renormalized(const ComplexMatrixd& m, const std::vector<Index>& dims) {
  return DensityMatrixd(ComplexMatrixd(m / m.trace().real()), dims);
}

ComplexMatrixd rk4_step(const ChannelSpec& channel, const ComplexMatrixd& rho, double h) {
  const ComplexMatrixd k1 = thermal_generator(channel, rho);
  const ComplexMatrixd k2 = thermal_generator(channel, rho + 0.5 * h * k1);
  const ComplexMatrixd k3 = thermal_generator(channel, rho + 0.5 * h * k2);
  const ComplexMatrixd k4 = thermal_generator(channel, rho + h * k3);
  return hermitian_part(rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

void check_integrated(const ComplexMatrixd& rho, double t) {
  const double drift = std::abs(rho.trace() - std::complex<double>(1.0));
  if (!(drift <= kTraceDrift)) {
    std::ostringstream msg;
    msg << "Lindblad integration failed at t = " << t << ": trace drift " << drift
        << " exceeds " << kTraceDrift << "; increase the number of steps";
    throw IntegrationFailure(msg.str());
  }
  const double lowest = hermitian_eigen<double>(rho).eigenvalues().minCoeff();
  if (!(lowest >= kNegativeEigenvalue)) {
    std::ostringstream msg;
    msg << "Lindblad integration failed at t = " << t << ": eigenvalue " << lowest
        << " below " << kNegativeEigenvalue << "; increase the number of steps";
    throw IntegrationFailure(msg.str());
  }
}

ComplexMatrixd propagate_thermal(const ChannelSpec& channel, const ComplexMatrixd& rho0,
                                 double t, std::size_t steps) {
  ComplexMatrixd rho = rho0;
  const double h = t / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) rho = rk4_step(channel, rho, h);
  check_integrated(rho, t);
  return rho;
}

// Composite weights for a uniform parameter grid with n intervals of width 1.
std::vector<double> unit_weights(std::size_t n, QuadratureRule rule) {
  std::vector<double> c(n + 1, 0.0);
  if (rule == QuadratureRule::Trapezoid || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      c[i] += 0.5;
      c[i + 1] += 0.5;
    }
    return c;
  }
  // Simpson on pairs of intervals, 3/8 rule on the last three if n is odd.
  const std::size_t simpson_end = (n % 2 == 0) ? n : n - 3;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    c[i] += 1.0 / 3.0;
    c[i + 1] += 4.0 / 3.0;
    c[i + 2] += 1.0 / 3.0;
  }
  if (simpson_end != n) {
    const std::size_t i = simpson_end;
    c[i] += 3.0 / 8.0;
    c[i + 1] += 9.0 / 8.0;
    c[i + 2] += 9.0 / 8.0;
    c[i + 3] += 3.0 / 8.0;
  }
  return c;
}

}  // namespace

ChannelSpec ChannelSpec::dephasing(double gamma) {
  return {.kind = ChannelKind::Dephasing, .gamma = gamma};
}

ChannelSpec ChannelSpec::dephasing_non_monotonic(double gamma, double k) {
  return {.kind = ChannelKind::DephasingNonMonotonic, .gamma = gamma, .k = k};
}

ChannelSpec ChannelSpec::depolarising(double gamma) {
  return {.kind = ChannelKind::Depolarising, .gamma = gamma};
}

ChannelSpec ChannelSpec::depolarising_non_monotonic(double gamma, double k) {
  return {.kind = ChannelKind::DepolarisingNonMonotonic, .gamma = gamma, .k = k};
}

ChannelSpec ChannelSpec::thermal(double omega, double gamma, double beta) {
  return {.kind = ChannelKind::Thermal, .gamma = gamma, .omega = omega, .beta = beta};
}

bool ChannelSpec::non_monotonic() const {
  return kind == ChannelKind::DephasingNonMonotonic ||
         kind == ChannelKind::DepolarisingNonMonotonic;
}

bool ChannelSpec::is_dephasing() const {
  return kind == ChannelKind::Dephasing || kind == ChannelKind::DephasingNonMonotonic;
}

bool ChannelSpec::is_depolarising() const {
  return kind == ChannelKind::Depolarising || kind == ChannelKind::DepolarisingNonMonotonic;
}

void ChannelSpec::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (non_monotonic() && !(k > gamma)) {
    throw std::invalid_argument("non-monotonic channels require k > gamma");
  }
  if (is_thermal() && !(omega > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("thermal channel requires omega > 0 and beta > 0");
  }
}

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Dephasing:
      return "dephasing";
    case ChannelKind::DephasingNonMonotonic:
      return "dephasing-nm";
    case ChannelKind::Depolarising:
      return "depolarising";
    case ChannelKind::DepolarisingNonMonotonic:
      return "depolarising-nm";
    case ChannelKind::Thermal:
      return "thermal";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(std::string_view name) {
  for (auto kind : {ChannelKind::Dephasing, ChannelKind::DephasingNonMonotonic,
                    ChannelKind::Depolarising, ChannelKind::DepolarisingNonMonotonic,
                    ChannelKind::Thermal}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

double decay_exponent(const ChannelSpec& channel, double t) {
  if (!channel.non_monotonic()) return channel.gamma * t;
  const double s = std::sin(channel.k * t);
  const double wobble = s * s / channel.k;
  return channel.modulation == Modulation::Printed ? channel.gamma * (t + wobble)
                                                   : channel.gamma * t + wobble;
}

double decay_rate(const ChannelSpec& channel, double t) {
  if (!channel.non_monotonic()) return channel.gamma;
  const double wobble = std::sin(2.0 * channel.k * t);
  return channel.modulation == Modulation::Printed ? channel.gamma * (1.0 + wobble)
                                                   : channel.gamma + wobble;
}

double thermal_occupation(const ChannelSpec& channel) {
  const double exponent = channel.occupation == ThermalOccupation::DetailedBalance
                              ? 2.0 * channel.beta * channel.omega
                              : 2.0 * channel.omega / channel.beta;
  return 1.0 / std::expm1(exponent);
}

ComplexMatrixd thermal_generator(const ChannelSpec& channel, const ComplexMatrixd& rho) {
  const std::complex<double> i(0.0, 1.0);
  const ComplexMatrixd h = channel.omega * pauli_z<double>();
  // sigma_+ = (sigma_x + i sigma_y)/2 = |0><1|.
  ComplexMatrixd raise = ComplexMatrixd::Zero(2, 2);
  raise(0, 1) = 1.0;
  const ComplexMatrixd lower = raise.adjoint();

  const double n = thermal_occupation(channel);
  const double anticommutator_sign =
      channel.dissipator == DissipatorSign::Standard ? -1.0 : 1.0;

  ComplexMatrixd out = -i * (h * rho - rho * h);
  auto dissipate = [&](double rate, const ComplexMatrixd& jump) {
    const ComplexMatrixd jj = jump.adjoint() * jump;
    out += rate * (2.0 * jump * rho * jump.adjoint() +
                   anticommutator_sign * (jj * rho + rho * jj));
  };
  dissipate(channel.gamma * n / 2.0, raise);
  dissipate(channel.gamma * (n + 1.0) / 2.0, lower);
  return out;
}

TimeGrid::TimeGrid(std::vector<double> times, std::vector<double> weights)
    : times_(std::move(times)), weights_(std::move(weights)) {
  if (times_.size() < 2) throw std::invalid_argument("time grid needs at least 2 points");
  if (times_.size() != weights_.size()) {
    throw std::invalid_argument("time grid and weights differ in length");
  }
  if (times_.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::make(double tau, const GridOptions& options) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("duration must be finite and positive");
  }
  if (options.points < 3) throw std::invalid_argument("time grid needs at least 3 points");
  const std::size_t n = options.points - 1;
  const std::vector<double> c = unit_weights(n, options.rule);
  const double ds = 1.0 / static_cast<double>(n);

  std::vector<double> times(n + 1), weights(n + 1), jacobian(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) * ds;
    if (options.spacing == GridSpacing::Uniform) {
      times[i] = tau * s;
      jacobian[i] = tau;
    } else {
      times[i] = tau * s * s;
      jacobian[i] = 2.0 * tau * s;
    }
    weights[i] = c[i] * ds * jacobian[i];
  }
  times[n] = tau;
  TimeGrid grid(std::move(times), std::move(weights));
  grid.rule_ = options.rule;
  grid.step_ = ds;
  grid.jacobian_ = std::move(jacobian);
  return grid;
}

DensityMatrixd state_at(const ChannelSpec& channel, const DensityMatrixd& rho0, double t) {
  check_time(t);
  check_compatible(channel, rho0);
  if (t == 0.0) return rho0;

  const ComplexMatrixd& m = rho0.matrix();
  if (channel.is_dephasing()) {
    const double nu = std::exp(-decay_exponent(channel, t));
    return DensityMatrixd(ComplexMatrixd(m.diagonal().asDiagonal()) + nu * off_diagonal(m),
                          rho0.local_dims());
  }
  if (channel.is_depolarising()) {
    const double keep = std::exp(-decay_exponent(channel, t));
    const Index d = rho0.dim();
    const ComplexMatrixd mixed = ComplexMatrixd::Identity(d, d) / static_cast<double>(d);
    return DensityMatrixd(ComplexMatrixd(keep * m + (1.0 - keep) * mixed), rho0.local_dims());
  }
  return renormalized(propagate_thermal(channel, m, t, kThermalStateSteps), rho0.local_dims());
}

HermitianOperatord liouvillian_at(const ChannelSpec& channel, const DensityMatrixd& rho0,
                                  double t) {
  check_time(t);
  check_compatible(channel, rho0);
  const ComplexMatrixd& m = rho0.matrix();
  if (channel.is_dephasing()) {
    const double nu = std::exp(-decay_exponent(channel, t));
    return HermitianOperatord(ComplexMatrixd(-decay_rate(channel, t) * nu * off_diagonal(m)));
  }
  if (channel.is_depolarising()) {
    const double keep = std::exp(-decay_exponent(channel, t));
    const Index d = rho0.dim();
    const ComplexMatrixd mixed = ComplexMatrixd::Identity(d, d) / static_cast<double>(d);
    return HermitianOperatord(ComplexMatrixd(-decay_rate(channel, t) * keep * (m - mixed)));
  }
  const DensityMatrixd rho = state_at(channel, rho0, t);
  return HermitianOperatord(thermal_generator(channel, rho.matrix()));
}

Trajectory integrate_lindblad(const ChannelSpec& channel, const DensityMatrixd& rho0,
                              double tau, std::size_t steps) {
  if (steps < 100) throw std::invalid_argument("Lindblad integration needs >= 100 steps");
  const GridOptions options{.points = steps + 1,
                            .spacing = GridSpacing::Uniform,
                            .rule = QuadratureRule::Trapezoid};
  return integrate_lindblad(channel, rho0, TimeGrid::make(tau, options), 1);
}

Trajectory integrate_lindblad(const ChannelSpec& channel, const DensityMatrixd& rho0,
                              const TimeGrid& grid, std::size_t substeps) {
  check_compatible(channel, rho0);
  if (!channel.is_thermal()) {
    throw std::invalid_argument("Lindblad integration is only used for the thermal channel");
  }
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");

  Trajectory traj;
  traj.channel = channel;
  traj.grid = grid;
  traj.states.reserve(grid.size());
  traj.derivatives.reserve(grid.size());

  const auto& times = grid.times();
  ComplexMatrixd rho = rho0.matrix();
  traj.states.push_back(rho0);
  traj.derivatives.emplace_back(thermal_generator(channel, rho));
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = (times[i] - times[i - 1]) / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) rho = rk4_step(channel, rho, h);
    check_integrated(rho, times[i]);
    traj.states.push_back(renormalized(rho, rho0.local_dims()));
    traj.derivatives.emplace_back(thermal_generator(channel, rho));
  }
  return traj;
}

Trajectory make_trajectory(const ChannelSpec& channel, const DensityMatrixd& rho0, double tau,
                           const GridOptions& options) {
  check_compatible(channel, rho0);
  const TimeGrid grid = TimeGrid::make(tau, options);
  if (channel.is_thermal()) return integrate_lindblad(channel, rho0, grid, options.substeps);

  Trajectory traj;
  traj.channel = channel;
  traj.grid = grid;
  traj.states.reserve(grid.size());
  traj.derivatives.reserve(grid.size());
  for (double t : grid.times()) {
    traj.states.push_back(state_at(channel, rho0, t));
    traj.derivatives.push_back(liouvillian_at(channel, rho0, t));
  }
  return traj;
}

Trajectory tabulate_trajectory(const TimeGrid& grid, const StateDerivativeFn& eval,
                               std::vector<Index> local_dims) {
  Trajectory traj;
  traj.grid = grid;
  for (double t : grid.times()) {
    auto [rho, drho] = eval(t);
    traj.states.emplace_back(rho, local_dims);
    traj.derivatives.emplace_back(drho);
  }
  return traj;
}

double entropy_rate(const DensityMatrixd& rho, const HermitianOperatord& derivative,
                    double floor) {
  if (rho.dim() != derivative.dim()) {
    throw DimensionMismatch("entropy rate of state and derivative of different dimension");
  }
  if (!(std::abs(derivative.trace()) <= 1e-9)) {
    throw std::invalid_argument("state derivative must be traceless");
  }
  const HermitianOperatord log_rho = matrix_log_floor(rho, floor);
  return -trace_product<double>(derivative.matrix(), log_rho.matrix());
}

}  // namespace rsl
