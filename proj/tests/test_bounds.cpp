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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "rsl/acceptance.hpp"
#include "rsl/bounds.hpp"
#include "rsl/states.hpp"

using namespace rsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> sample(const TimeGrid& grid, double (*f)(double)) {
  std::vector<double> out;
  for (double t : grid.times()) out.push_back(f(t));
  return out;
}

Trajectory constant_trajectory(const DensityMatrixd& rho, double tau) {
  const ComplexMatrixd zero = ComplexMatrixd::Zero(rho.dim(), rho.dim());
  return tabulate_trajectory(
      TimeGrid::make(tau, {.points = 101}),
      [&](double) { return std::pair{ComplexMatrixd(rho.matrix()), zero}; }, rho.local_dims());
}

// First time at which Delta M reaches mu, by bisection on the exact solution.
double crossing_time(const ChannelSpec& c, const FreeStateOracle& oracle,
                     const DensityMatrixd& rho0, double mu, double t_max) {
  const double m0 = resource_measure(oracle, rho0);
  const auto excess = [&](double t) { return resource_measure(oracle, state_at(c, rho0, t)) - m0 - mu; };
  double lo = 0.0, hi = t_max;
  if (excess(hi) > 0.0) return kInfiniteBound;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("time_average on closed-form integrands", "[bounds]") {
  for (auto spacing : {GridSpacing::Uniform, GridSpacing::Graded}) {
    for (auto rule : {QuadratureRule::Simpson, QuadratureRule::Trapezoid}) {
      const auto grid = TimeGrid::make(std::numbers::pi, {.points = 1001, .spacing = spacing, .rule = rule});
      CHECK_THAT(time_average(sample(grid, [](double) { return 2.0; }), grid), WithinRel(2.0, 1e-12));
      const double tol = rule == QuadratureRule::Simpson ? 1e-10 : 1e-5;
      CHECK_THAT(time_average(sample(grid, [](double t) { return t; }), grid),
                 WithinRel(std::numbers::pi / 2, tol));
      CHECK_THAT(time_average(sample(grid, [](double t) { return std::pow(std::sin(t), 2); }), grid),
                 WithinAbs(0.5, 1e-6));
    }
  }
  // |cos t| over [0, pi] averages to 2/pi; the kink sits between grid points.
  const auto grid = TimeGrid::make(std::numbers::pi, {.points = 100, .spacing = GridSpacing::Uniform});
  CHECK_THAT(time_average(sample(grid, [](double t) { return std::cos(t); }), grid),
             WithinAbs(2.0 / std::numbers::pi, 1e-7));

  // An unbounded sample where dt/ds vanishes carries no weight.
  const auto graded = TimeGrid::make(1.0);
  auto values = sample(graded, [](double) { return 1.0; });
  values.front() = std::numeric_limits<double>::infinity();
  CHECK_THAT(time_average(values, graded), WithinRel(1.0, 1e-9));

  const std::vector<double> times = {0.0, 1.0, 3.0}, ys = {1.0, 1.0, 1.0};
  CHECK_THAT(time_average(ys, times), WithinRel(1.0, 1e-14));
  CHECK_THROWS(time_average(std::vector<double>{1.0}, graded));
}

TEST_CASE("bounds are tight for dephasing of Werner states", "[bounds]") {
  const auto oracle = FreeStateOracle::werner_separable();
  for (double p : {0.0, 0.5}) {
    for (double tau : {0.5, 2.0}) {
      const auto traj = make_trajectory(ChannelSpec::dephasing(1.0), werner_state(p), tau);
      const auto report = evaluate_bounds(traj, oracle);
      INFO("p=" << p << " tau=" << tau);
      CHECK_THAT(report.T_M / tau, WithinAbs(1.0, 1e-3));
      CHECK_THAT(report.T_tilde / tau, WithinAbs(1.0, 1e-3));
      CHECK(report.delta_M < 0.0);
      CHECK(report.x_M == tau);
    }
  }
}

TEST_CASE("every bound stays below tau under depolarising noise", "[bounds]") {
  const auto oracle = FreeStateOracle::werner_separable();
  for (const auto& c : {ChannelSpec::depolarising(1.0), ChannelSpec::depolarising_non_monotonic(0.2, 4.0)}) {
    for (double tau : {0.3, 1.0, 3.0}) {
      const auto report = evaluate_bounds(make_trajectory(c, werner_state(0.1), tau), oracle,
                                          {.framing = Framing::Both});
      INFO(to_string(c.kind) << " tau=" << tau);
      const double slack = 1e-6 * tau;
      CHECK(report.T_M <= tau + slack);
      CHECK(report.T_tilde <= tau + slack);
      CHECK(report.T_qsl <= tau + slack);
      REQUIRE(report.T_d.has_value());
      CHECK(*report.T_d <= tau + slack);
      REQUIRE(report.T_g.has_value());
      CHECK(*report.T_g <= tau + slack);
    }
  }
}

TEST_CASE("T_M and T_tilde coincide for unitary motion", "[bounds]") {
  std::mt19937_64 rng(30);
  const auto oracle = FreeStateOracle::incoherent();
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrixd h = test::random_hermitian(4, rng);
    const double tau = 0.5;
    const auto traj = test::unitary_trajectory(h, test::random_state(4, rng), tau);
    const double tm = bound_TM(traj, oracle);
    CHECK(std::abs(tm - bound_Ttilde(traj, oracle)) <= 1e-9 * tau);
    CHECK(tm <= tau * (1 + 1e-6));
  }
}

TEST_CASE("generation and degradation bounds", "[bounds]") {
  const auto zero = basis_state<double>(0, {2, 2});
  CHECK(bound_Tg(constant_trajectory(zero, 1.0), zero) == 0.0);
  CHECK_THROWS(bound_Tg(constant_trajectory(bell_state<double>(), 1.0), zero));

  // sigma_x (x) sigma_x turns |00> into a Bell state at tau = pi/4.
  const ComplexMatrixd xx = Eigen::kroneckerProduct(pauli_x<double>(), pauli_x<double>()).eval();
  const double tau = std::numbers::pi / 4;
  const auto traj = test::unitary_trajectory(xx, zero, tau);
  const double tg = bound_Tg(traj, zero);
  CHECK(tg > 0.0);
  CHECK(tg <= tau * (1 + 1e-6));

  const auto w = werner_state(0.5);
  const auto deph = make_trajectory(ChannelSpec::dephasing(1.0), w, 1.0);
  CHECK(bound_Tg(deph, w) <= 1.0 + 1e-6);

  const auto gibbs = gibbs_state(4.0, 0.2);
  CHECK(bound_Td(constant_trajectory(gibbs, 1.0), gibbs) == 0.0);
  const auto thermal = ChannelSpec::thermal(4.0, 2.0, 0.2);
  const double t_long = 5.0 / 2.0;
  const auto relax = make_trajectory(thermal, plus_y_state<double>(), t_long);
  const double td = bound_Td(relax, gibbs);
  // Only approximately tight: rho_tau has not fully reached the Gibbs state.
  CHECK_THAT(td / t_long, WithinAbs(1.0, 1e-2));

  const auto depol = make_trajectory(ChannelSpec::depolarising(1.0), werner_state(0.1), 1.0);
  CHECK(bound_Td(depol, depol.final()) <= 1.0 + 1e-6);
  const auto pure_end = bound_Td_detail(traj, bell_state<double>());
  CHECK(std::isinf(pure_end.time));
  CHECK_FALSE(pure_end.diagnostic.empty());
}

TEST_CASE("quantum speed limit", "[bounds]") {
  const auto mixed = DensityMatrixd::maximally_mixed(4);
  CHECK(bound_qsl(constant_trajectory(mixed, 1.0)) == 0.0);
  const auto traj = make_trajectory(ChannelSpec::depolarising(1.0), werner_state(0.3), 1.5);
  const double q = bound_qsl(traj);
  CHECK(q > 0.0);
  CHECK(q <= 1.5 * (1 + 1e-6));
}

TEST_CASE("almost-free regularization is insensitive to epsilon", "[bounds]") {
  const auto oracle = FreeStateOracle::werner_separable();
  for (double tau : {0.5, 2.0}) {
    const auto traj = make_trajectory(ChannelSpec::dephasing(1.0), werner_state(0.0), tau);
    const auto a = bound_Ttilde_detail(traj, oracle, 1e-6);
    const auto b = bound_Ttilde_detail(traj, oracle, 1e-7);
    CHECK(a.epsilon_used > 0.0);
    CHECK(std::abs(a.time - b.time) <= 1e-4 * tau);
  }
}

TEST_CASE("minimum time to change the resource by mu", "[bounds]") {
  const auto oracle = FreeStateOracle::werner_separable();
  const auto c = ChannelSpec::dephasing(1.0);
  const std::vector<DensityMatrixd> family = {werner_state(0.0), werner_state(0.25), werner_state(0.5)};

  CHECK(std::isinf(min_time_mu(c, oracle, family, -0.8, 5.0).T_mu));

  const std::vector<DensityMatrixd> half = {werner_state(0.5)};
  const double full_drop = -resource_measure(oracle, werner_state(0.5));
  CHECK(std::isinf(min_time_mu(c, oracle, half, full_drop, 2.0).T_mu));

  const auto result = min_time_mu(c, oracle, family, -0.1, 5.0, 2001, {.points = 401});
  REQUIRE(std::isfinite(result.T_mu));
  double brute = kInfiniteBound;
  for (const auto& rho0 : family) {
    const double t = crossing_time(c, oracle, rho0, -0.1, 5.0);
    if (!std::isfinite(t)) continue;
    brute = std::min(brute, bound_TM(make_trajectory(c, rho0, t, {.points = 401}), oracle));
  }
  CHECK_THAT(result.T_mu, WithinRel(brute, 1e-6));
  REQUIRE(result.initial.has_value());
  REQUIRE(result.final.has_value());
  CHECK_THAT(resource_measure(oracle, *result.final) - resource_measure(oracle, *result.initial),
             WithinAbs(-0.1, kMuTolerance));

  CHECK_THROWS(min_time_mu(c, oracle, {}, -0.1, 5.0));
}

TEST_CASE("the verification suite rejects a flipped dissipator", "[bounds][acceptance]") {
  Conventions wrong;
  wrong.dissipator = DissipatorSign::AsPrinted;
  const auto results = run_checks(VerifyLevel::Fast, wrong);
  bool any_failed = false;
  for (const auto& r : results) any_failed = any_failed || !r.passed;
  CHECK(any_failed);
}
