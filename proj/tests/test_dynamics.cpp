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
#include <numeric>
#include <random>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "rsl/dynamics.hpp"
#include "rsl/errors.hpp"
#include "rsl/states.hpp"

using namespace rsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<ChannelSpec> all_channels() {
  return {ChannelSpec::dephasing(1.0), ChannelSpec::dephasing_non_monotonic(0.2, 4.0),
          ChannelSpec::depolarising(1.0), ChannelSpec::depolarising_non_monotonic(0.2, 4.0),
          ChannelSpec::thermal(4.0, 2.0, 0.2)};
}

DensityMatrixd initial_for(const ChannelSpec& channel, std::mt19937_64& rng) {
  return test::random_state(channel.is_thermal() ? 2 : 4, rng);
}

// Werner mixing parameter from the |00><00| population.
double werner_parameter(const DensityMatrixd& rho) { return 2.0 - 4.0 * rho(0, 0).real(); }

}  // namespace

TEST_CASE("channel parameters are validated", "[dynamics]") {
  CHECK_THROWS(ChannelSpec::dephasing(0.0).validate());
  CHECK_THROWS(ChannelSpec::dephasing_non_monotonic(1.0, 1.0).validate());
  CHECK_THROWS(ChannelSpec::depolarising_non_monotonic(1.0, 0.5).validate());
  CHECK_THROWS(ChannelSpec::thermal(0.0, 1.0, 1.0).validate());
  CHECK_THROWS(ChannelSpec::thermal(1.0, 1.0, -1.0).validate());
  CHECK_NOTHROW(ChannelSpec::dephasing_non_monotonic(0.2, 4.0).validate());

  CHECK(channel_kind_from_string("depolarising-nm") == ChannelKind::DepolarisingNonMonotonic);
  CHECK_THROWS(channel_kind_from_string("amplitude-damping"));
  for (const auto& c : all_channels()) CHECK(channel_kind_from_string(to_string(c.kind)) == c.kind);
}

TEST_CASE("time grids carry quadrature weights that sum to tau", "[dynamics]") {
  for (auto spacing : {GridSpacing::Uniform, GridSpacing::Graded}) {
    for (auto rule : {QuadratureRule::Trapezoid, QuadratureRule::Simpson}) {
      for (std::size_t points : {3u, 4u, 5u, 1000u, 1001u}) {
        const auto grid = TimeGrid::make(2.5, {.points = points, .spacing = spacing, .rule = rule});
        REQUIRE(grid.size() == points);
        CHECK(grid.times().front() == 0.0);
        CHECK(grid.times().back() == 2.5);
        const double total = std::accumulate(grid.weights().begin(), grid.weights().end(), 0.0);
        CHECK_THAT(total, WithinRel(2.5, 1e-12));
      }
    }
  }
  // Graded Simpson integrates t exactly: the integrand in s is a cubic.
  const auto grid = TimeGrid::make(3.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) integral += grid.weights()[i] * grid.times()[i];
  CHECK_THAT(integral, WithinRel(4.5, 1e-12));

  CHECK_THROWS(TimeGrid::make(0.0));
  CHECK_THROWS(TimeGrid::make(1.0, {.points = 2}));
  CHECK_THROWS(TimeGrid({0.0, 1.0, 1.0}, {0.5, 0.5, 0.0}));
  CHECK_THROWS(TimeGrid({0.1, 1.0}, {0.5, 0.5}));
}

TEST_CASE("decay exponents of the non-monotonic variants", "[dynamics]") {
  auto printed = ChannelSpec::dephasing_non_monotonic(0.2, 4.0);
  printed.modulation = Modulation::Printed;
  const auto oscillating = ChannelSpec::dephasing_non_monotonic(0.2, 4.0);
  bool negative_rate = false;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.01 * i;
    const double s = std::sin(4.0 * t);
    CHECK_THAT(decay_exponent(printed, t), WithinAbs(0.2 * (t + s * s / 4.0), 1e-15));
    CHECK_THAT(decay_exponent(oscillating, t), WithinAbs(0.2 * t + s * s / 4.0, 1e-15));
    CHECK(decay_rate(printed, t) >= 0.0);
    negative_rate = negative_rate || decay_rate(oscillating, t) < 0.0;
  }
  CHECK(negative_rate);
  CHECK(decay_rate(ChannelSpec::dephasing(0.7), 3.0) == 0.7);
}

TEST_CASE("state_at on reference inputs", "[dynamics]") {
  std::mt19937_64 rng(10);
  for (const auto& c : all_channels()) {
    const auto rho0 = initial_for(c, rng);
    CHECK(max_norm_distance(state_at(c, rho0, 0.0), rho0) == 0.0);
    CHECK_THROWS(state_at(c, rho0, -1.0));
  }
  CHECK_THROWS_AS(state_at(ChannelSpec::thermal(1, 1, 1), werner_state(0.5), 1.0),
                  DimensionMismatch);

  // Dephasing multiplies the Werner coherence (1 - p)/2 by exp(-gamma t).
  const auto deph = state_at(ChannelSpec::dephasing(1.0), werner_state(0.5), 0.7);
  CHECK_THAT(deph(0, 3).real(), WithinAbs(std::exp(-0.7) * 0.25, 1e-15));
  CHECK(max_norm_distance(state_at(ChannelSpec::dephasing(1.0), werner_state(0.5), 60.0),
                          dephase(werner_state(0.5))) < 1e-15);

  // Depolarising maps Werner states to Werner states with p(t) = 1 - e^{-gamma t}(1 - p0).
  for (double t : {0.1, 0.5, 2.0}) {
    const double p = 1.0 - std::exp(-1.3 * t + std::log(1.0 - 0.2));
    const auto rho = state_at(ChannelSpec::depolarising(1.3), werner_state(0.2), t);
    CHECK(max_norm_distance(rho, werner_state(p)) < 1e-14);
    CHECK_THAT(werner_parameter(rho), WithinAbs(p, 1e-14));
  }
}

TEST_CASE("channels produce valid states and commute with dephasing on Werner inputs",
          "[dynamics]") {
  std::mt19937_64 rng(11);
  for (const auto& c : all_channels()) {
    const auto rho0 = initial_for(c, rng);
    for (int i = 0; i < 50; ++i) {
      const double t = (10.0 / c.gamma) * i / 49.0;
      CHECK_NOTHROW(state_at(c, rho0, t));
    }
  }
  const auto w = werner_state(0.4);
  for (double t : {0.3, 1.0, 3.0}) {
    const auto depol = ChannelSpec::depolarising(1.0);
    CHECK(max_norm_distance(dephase(state_at(depol, w, t)), state_at(depol, dephase(w), t)) < 1e-15);
    const auto deph = ChannelSpec::dephasing_non_monotonic(0.2, 4.0);
    CHECK(max_norm_distance(dephase(state_at(deph, w, t)), dephase(w)) == 0.0);
  }
}

TEST_CASE("liouvillian_at matches central differences of state_at", "[dynamics]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> when(0.01, 3.0);
  const double h = 1e-6;
  for (const auto& c : all_channels()) {
    for (int i = 0; i < 20; ++i) {
      const auto rho0 = initial_for(c, rng);
      const double t = when(rng);
      const ComplexMatrixd fd =
          (state_at(c, rho0, t + h).matrix() - state_at(c, rho0, t - h).matrix()) / (2 * h);
      const auto l = liouvillian_at(c, rho0, t);
      INFO(to_string(c.kind) << " t=" << t);
      CHECK(max_abs(ComplexMatrixd(fd - l.matrix())) < 1e-5);
      CHECK(std::abs(l.trace()) < 1e-12);
    }
  }
  // Off-diagonal derivative of the Bell coherence at t = 0 is -gamma/2.
  const auto l0 = liouvillian_at(ChannelSpec::dephasing(0.8), bell_state<double>(), 0.0);
  CHECK_THAT(l0(0, 3).real(), WithinAbs(-0.4, 1e-15));
}

TEST_CASE("thermal generator fixed point and occupation conventions", "[dynamics]") {
  const auto c = ChannelSpec::thermal(4.0, 2.0, 0.2);
  const auto gibbs = gibbs_state(4.0, 0.2);
  CHECK(max_abs(thermal_generator(c, gibbs.matrix())) < 1e-10);
  CHECK_THAT(thermal_occupation(c), WithinRel(1.0 / std::expm1(1.6), 1e-14));

  auto written = c;
  written.occupation = ThermalOccupation::AsWritten;
  CHECK_THAT(thermal_occupation(written), WithinRel(1.0 / std::expm1(40.0), 1e-12));
  CHECK(max_abs(thermal_generator(written, gibbs.matrix())) > 1e-3);

  const auto traj = integrate_lindblad(c, gibbs, 2.0, 1000);
  CHECK(max_norm_distance(traj.final(), gibbs) <= 1e-8);
}

TEST_CASE("Lindblad integration approaches the Gibbs state", "[dynamics]") {
  const auto c = ChannelSpec::thermal(4.0, 2.0, 0.2);
  const auto gibbs = gibbs_state(4.0, 0.2);
  const auto traj = integrate_lindblad(c, plus_y_state<double>(), 3.0, 3000);
  CHECK(max_norm_distance(traj.initial(), plus_y_state<double>()) == 0.0);
  double previous = relative_entropy(traj.initial(), gibbs);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double d = relative_entropy(traj.states[i], gibbs);
    CHECK(d < previous);
    previous = d;
    CHECK_THAT(traj.states[i].matrix().trace().real(), WithinAbs(1.0, 1e-9));
    CHECK(std::abs(traj.derivatives[i].trace()) < 1e-9);
  }
  CHECK(max_norm_distance(traj.final(), gibbs) < 0.05 * max_norm_distance(traj.initial(), gibbs));
}

TEST_CASE("Lindblad integration converges under step halving", "[dynamics]") {
  const auto c = ChannelSpec::thermal(4.0, 2.0, 0.2);
  const auto coarse = integrate_lindblad(c, plus_y_state<double>(), 1.0, 1000);
  const auto fine = integrate_lindblad(c, plus_y_state<double>(), 1.0, 2000);
  CHECK(max_norm_distance(coarse.final(), fine.final()) <= 1e-8);
}

TEST_CASE("Lindblad integration rejects bad requests", "[dynamics]") {
  const auto c = ChannelSpec::thermal(4.0, 2.0, 0.2);
  CHECK_THROWS(integrate_lindblad(c, plus_y_state<double>(), 1.0, 99));
  CHECK_THROWS(integrate_lindblad(ChannelSpec::dephasing(1.0), werner_state(0.5), 1.0, 100));

  // With the anticommutator sign flipped the generator is not trace
  // preserving and the integrator reports the drift.
  auto flipped = c;
  flipped.dissipator = DissipatorSign::AsPrinted;
  CHECK(std::abs(thermal_generator(flipped, plus_y_state<double>().matrix()).trace()) > 1e-3);
  CHECK_THROWS_AS(integrate_lindblad(flipped, plus_y_state<double>(), 1.0, 1000),
                  IntegrationFailure);
}

TEST_CASE("entropy_rate", "[dynamics]") {
  std::mt19937_64 rng(13);
  const double h = 1e-5;
  for (const auto& c : all_channels()) {
    for (int i = 0; i < 5; ++i) {
      const auto rho0 = initial_for(c, rng);
      const double t = 0.1 + 0.5 * i;
      const double fd = (von_neumann_entropy(state_at(c, rho0, t + h)) -
                         von_neumann_entropy(state_at(c, rho0, t - h))) /
                        (2 * h);
      const double rate = entropy_rate(state_at(c, rho0, t), liouvillian_at(c, rho0, t));
      CHECK_THAT(rate, WithinAbs(fd, 1e-5));
    }
  }

  // Unitary motion is isentropic.
  const ComplexMatrixd hamiltonian = test::random_hermitian(4, rng);
  const auto rho = test::random_state(4, rng);
  const HermitianOperatord commutator(ComplexMatrixd(
      std::complex<double>(0, -1) * (hamiltonian * rho.matrix() - rho.matrix() * hamiltonian)));
  CHECK_THAT(entropy_rate(rho, commutator), WithinAbs(0.0, 1e-9));

  // Dephasing a Bell state raises its entropy.
  const auto c = ChannelSpec::dephasing(1.0);
  const auto bell = bell_state<double>();
  CHECK(entropy_rate(state_at(c, bell, 0.01), liouvillian_at(c, bell, 0.01)) > 0.0);

  const HermitianOperatord not_traceless(ComplexMatrixd(ComplexMatrixd::Identity(4, 4)));
  CHECK_THROWS(entropy_rate(rho, not_traceless));
}

TEST_CASE("make_trajectory stores exact states and derivatives", "[dynamics]") {
  const auto c = ChannelSpec::depolarising_non_monotonic(0.2, 4.0);
  const auto w = werner_state(0.9);
  const auto traj = make_trajectory(c, w, 2.0, {.points = 101});
  REQUIRE(traj.size() == 101);
  REQUIRE(traj.derivatives.size() == 101);
  CHECK(traj.duration() == 2.0);
  for (std::size_t i = 0; i < traj.size(); i += 10) {
    const double t = traj.grid.times()[i];
    CHECK(max_norm_distance(traj.states[i], state_at(c, w, t)) == 0.0);
  }
  CHECK(traj.channel.has_value());
}
