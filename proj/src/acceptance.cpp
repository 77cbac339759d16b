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

#include "rsl/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rsl/bounds.hpp"
#include "rsl/errors.hpp"
#include "rsl/resources.hpp"
#include "rsl/states.hpp"

namespace rsl {

namespace {

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Collects measured values and the overall verdict of one check.
class Recorder {
 public:
  explicit Recorder(CheckResult& result) : result_(result) {}

  void expect(bool ok, const std::string& line) {
    result_.details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    if (!ok) result_.passed = false;
  }
  void note(const std::string& line) { result_.details.push_back("     " + line); }

 private:
  CheckResult& result_;
};

struct Fixture {
  const Conventions& conventions;

  ChannelSpec adjust(ChannelSpec c) const {
    c.modulation = conventions.modulation;
    c.occupation = conventions.occupation;
    c.dissipator = conventions.dissipator;
    return c;
  }

  BoundReport bounds(const ChannelSpec& channel, const DensityMatrixd& rho0,
                     const FreeStateOracle& oracle, double tau, Framing framing = Framing::None,
                     std::optional<std::size_t> points = {}) const {
    GridOptions grid = conventions.grid;
    if (points) grid.points = *points;
    return evaluate_bounds(make_trajectory(adjust(channel), rho0, tau, grid), oracle,
                           {.framing = framing});
  }
};

// Reference parameter sets shared by several checks.
ChannelSpec pure_dephasing(double gamma) { return ChannelSpec::dephasing(gamma); }
ChannelSpec pure_depolarising() { return ChannelSpec::depolarising(1.0); }
ChannelSpec nm_dephasing() { return ChannelSpec::dephasing_non_monotonic(0.2, 4.0); }
ChannelSpec nm_depolarising() { return ChannelSpec::depolarising_non_monotonic(0.2, 4.0); }
ChannelSpec thermalisation() { return ChannelSpec::thermal(4.0, 2.0, 0.2); }
FreeStateOracle reference_gibbs() { return FreeStateOracle::gibbs(4.0, 0.2); }

void check_dephasing_tightness(const Fixture& fx, Recorder& rec) {
  const auto oracle = FreeStateOracle::werner_separable();
  double lo = 2.0, hi = 0.0;
  for (double gamma : {0.1, 1.0}) {
    for (double p : {0.0, 0.5, 0.9}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const double tau = s / gamma;
        const auto r = fx.bounds(pure_dephasing(gamma), werner_state(p), oracle, tau);
        for (double t : {r.T_M, r.T_tilde, r.T_qsl}) {
          lo = std::min(lo, t / tau);
          hi = std::max(hi, t / tau);
        }
        const bool ok = std::min({r.T_M, r.T_tilde, r.T_qsl}) / tau >= 1 - 1e-3 &&
                        std::max({r.T_M, r.T_tilde, r.T_qsl}) / tau <= 1 + 1e-6;
        if (!ok) {
          rec.expect(false, format("gamma=%g p=%g tau=%g: T_M/tau=%.9f T~/tau=%.9f T_qsl/tau=%.9f",
                                   gamma, p, tau, r.T_M / tau, r.T_tilde / tau, r.T_qsl / tau));
        }
      }
    }
  }
  rec.expect(lo >= 1 - 1e-3 && hi <= 1 + 1e-6,
             format("18 cases: T/tau in [%.9f, %.9f], required [0.999, 1.000001]", lo, hi));
}

void check_depolarising_hierarchy(const Fixture& fx, Recorder& rec) {
  const auto oracle = FreeStateOracle::werner_separable();
  for (double tau : {0.25, 0.5, 1.0, 2.0}) {
    const auto r = fx.bounds(pure_depolarising(), werner_state(0.9), oracle, tau);
    const double m = 1e-4 * tau;
    const bool ok = r.T_tilde + m < r.T_M && r.T_M + m < r.T_qsl &&
                    std::abs(r.T_qsl - tau) <= 1e-3 * tau;
    rec.expect(ok, format("tau=%g: T~=%.6f < T_M=%.6f < T_qsl=%.6f, |T_qsl-tau|/tau=%.2e (<= 1e-3)",
                          tau, r.T_tilde, r.T_M, r.T_qsl, std::abs(r.T_qsl - tau) / tau));
  }
}

void check_nm_dephasing(const Fixture& fx, Recorder& rec) {
  const auto oracle = FreeStateOracle::werner_separable();
  for (double tau : {1.0, 2.0, 4.0}) {
    const auto r = fx.bounds(nm_dephasing(), werner_state(0.5), oracle, tau);
    const double m = 1e-4 * tau;
    const bool ok = std::abs(r.T_tilde - r.T_qsl) <= 1e-3 * tau && r.T_qsl + m < r.T_M &&
                    r.T_M + m < tau;
    rec.expect(ok, format("tau=%g: T~=%.6f ~ T_qsl=%.6f (diff %.2e), T_M=%.6f < tau", tau,
                          r.T_tilde, r.T_qsl, std::abs(r.T_tilde - r.T_qsl), r.T_M));
    const auto a = fx.bounds(nm_dephasing(), werner_state(0.3), oracle, tau);
    const auto b = fx.bounds(nm_dephasing(), werner_state(0.7), oracle, tau);
    const double dq = std::abs(a.T_qsl - b.T_qsl), dt = std::abs(a.T_tilde - b.T_tilde);
    const double dm = std::abs(a.T_M - b.T_M);
    rec.expect(dq <= 1e-6 * tau && dt <= 1e-6 * tau && dm > 1e-4 * tau,
               format("tau=%g, p=0.3 vs 0.7: |dT_qsl|=%.2e |dT~|=%.2e (<= %.0e), |dT_M|=%.2e (> %.0e)",
                      tau, dq, dt, 1e-6 * tau, dm, 1e-4 * tau));
  }
}

void check_nm_depolarising(const Fixture& fx, Recorder& rec) {
  const auto oracle = FreeStateOracle::werner_separable();
  for (double tau : {1.0, 2.0, 4.0}) {
    const auto r = fx.bounds(nm_depolarising(), werner_state(0.9), oracle, tau);
    const double m = 1e-4 * tau;
    const bool ok = r.T_tilde + m < r.T_M && r.T_M + m < r.T_qsl && r.T_qsl + m < tau;
    rec.expect(ok, format("tau=%g: T~=%.6f < T_M=%.6f < T_qsl=%.6f < tau", tau, r.T_tilde,
                          r.T_M, r.T_qsl));
  }
}

void check_thermalisation(const Fixture& fx, Recorder& rec) {
  const auto oracle = reference_gibbs();
  for (double tau : {0.1, 0.5, 1.0}) {
    const auto r = fx.bounds(thermalisation(), plus_y_state<double>(), oracle, tau);
    const bool ok = std::abs(r.T_M - tau) <= 1e-3 * tau &&
                    std::abs(r.T_tilde - r.T_M) <= 1e-4 * tau && r.T_qsl < tau * (1 - 1e-4);
    rec.expect(ok, format("tau=%g: T_M=%.7f T~=%.7f (|T~-T_M|/tau=%.1e) T_qsl=%.6f", tau, r.T_M,
                          r.T_tilde, std::abs(r.T_tilde - r.T_M) / tau, r.T_qsl));
  }
  RealVector<double> p(2);
  p << 0.9, 0.1;
  const auto commuting = DensityMatrixd::diagonal(p, {2});
  for (double tau : {0.1, 0.5, 1.0}) {
    const auto r = fx.bounds(thermalisation(), commuting, oracle, tau);
    const double ratio = r.T_qsl / tau;
    rec.expect(ratio >= 1 - 5e-2 && ratio <= 1 + 1e-9,
               format("diag(0.9, 0.1), tau=%g: T_qsl/tau=%.7f in [0.95, 1]", tau, ratio));
  }
}

DensityMatrixd random_state(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrixd g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  const ComplexMatrixd m = g * g.adjoint();
  std::vector<Index> dims;
  if (dim == 4) dims = {2, 2};
  return DensityMatrixd(ComplexMatrixd(m / m.trace().real()), dims);
}

void check_validity_sweep(const Fixture& fx, Recorder& rec) {
  std::mt19937_64 rng(20260517);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto in = [&](double a, double b) { return a + (b - a) * unit(rng); };
  std::size_t violations = 0, finite = 0, infinite = 0;
  double worst = -kInfiniteBound;
  std::string worst_case;
  for (int draw = 0; draw < 200; ++draw) {
    const int family = draw % 5;
    const double gamma = in(0.1, 2.0);
    const double tau = in(0.1, 5.0);
    ChannelSpec channel;
    DensityMatrixd rho0;
    FreeStateOracle oracle = FreeStateOracle::werner_separable();
    if (family == 4) {
      const double omega = in(0.5, 5.0), beta = in(0.05, 2.0);
      channel = ChannelSpec::thermal(omega, gamma, beta);
      rho0 = random_state(2, rng);
      oracle = FreeStateOracle::gibbs(omega, beta);
    } else {
      const double k = gamma + (8.0 - gamma) * (1.0 - unit(rng));  // (gamma, 8]
      const double p0 = in(0.0, 0.95);
      switch (family) {
        case 0: channel = ChannelSpec::dephasing(gamma); break;
        case 1: channel = ChannelSpec::dephasing_non_monotonic(gamma, k); break;
        case 2: channel = ChannelSpec::depolarising(gamma); break;
        default: channel = ChannelSpec::depolarising_non_monotonic(gamma, k); break;
      }
      rho0 = werner_state(p0);
    }
    const auto r = fx.bounds(channel, rho0, oracle, tau, Framing::Both);
    const std::pair<const char*, std::optional<double>> values[] = {
        {"T_M", r.T_M}, {"T~", r.T_tilde}, {"T_qsl", r.T_qsl}, {"T_g", r.T_g}, {"T_d", r.T_d}};
    for (const auto& [name, v] : values) {
      if (!v) continue;
      if (!std::isfinite(*v)) {
        ++infinite;
        continue;
      }
      ++finite;
      const double excess = *v / tau - 1.0;
      if (*v > tau * (1 + 1e-6) + 1e-8) ++violations;
      if (excess > worst) {
        worst = excess;
        worst_case = format("%s, %s tau=%.3f", std::string(to_string(channel.kind)).c_str(), name, tau);
      }
    }
  }
  rec.expect(violations == 0,
             format("200 draws, %zu finite bounds (%zu infinite): %zu violations of T <= tau(1+1e-6)+1e-8",
                    finite, infinite, violations));
  rec.note(format("largest T/tau - 1 = %.3e (%s)", worst, worst_case.c_str()));
}

double max_norm(const ComplexMatrixd& m) { return m.cwiseAbs().maxCoeff(); }

void check_cross_checks(const Fixture& fx, Recorder& rec) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ChannelSpec channels[] = {fx.adjust(pure_dephasing(1.0)), fx.adjust(nm_dephasing()),
                                  fx.adjust(pure_depolarising()), fx.adjust(nm_depolarising()),
                                  fx.adjust(thermalisation())};
  const double h = 1e-4;
  double worst_l = 0.0, worst_s = 0.0;
  for (const auto& channel : channels) {
    const Index dim = channel.is_thermal() ? 2 : 4;
    for (int i = 0; i < 20; ++i) {
      const auto rho0 = random_state(dim, rng);
      const double t = 0.05 + 2.95 * unit(rng);
      const ComplexMatrixd fd =
          (state_at(channel, rho0, t + h).matrix() - state_at(channel, rho0, t - h).matrix()) /
          (2 * h);
      const auto l = liouvillian_at(channel, rho0, t);
      worst_l = std::max(worst_l, max_norm(fd - l.matrix()));
      const double ds = (von_neumann_entropy(state_at(channel, rho0, t + h)) -
                         von_neumann_entropy(state_at(channel, rho0, t - h))) /
                        (2 * h);
      worst_s = std::max(worst_s, std::abs(ds - entropy_rate(state_at(channel, rho0, t), l)));
    }
  }
  rec.expect(worst_l <= 1e-5,
             format("liouvillian_at vs central differences, 100 points: max error %.2e (<= 1e-5)", worst_l));
  rec.expect(worst_s <= 1e-5,
             format("entropy_rate vs differentiated entropy: max error %.2e (<= 1e-5)", worst_s));

  // Trace drift: |Tr L(rho)| along a trajectory, integrated over its duration.
  try {
    const auto channel = fx.adjust(thermalisation());
    const double tau = 1.0;
    const auto traj = make_trajectory(channel, plus_y_state<double>(), tau, fx.conventions.grid);
    double rate = 0.0;
    for (const auto& rho : traj.states) {
      rate = std::max(rate, std::abs(thermal_generator(channel, rho.matrix()).trace()));
    }
    rec.expect(rate * tau <= 1e-9,
               format("Lindblad trace drift over tau=1: %.2e (<= 1e-9)", rate * tau));
  } catch (const IntegrationFailure& e) {
    rec.expect(false, std::string("Lindblad trace drift: ") + e.what());
  }

  const auto channel = fx.adjust(thermalisation());
  const auto gibbs = gibbs_state(channel.omega, channel.beta);
  const double residual = max_norm(thermal_generator(channel, gibbs.matrix()));
  rec.expect(residual <= 1e-10,
             format("Gibbs fixed point: max |L(G)| = %.2e (<= 1e-10)", residual));

  // Grid doubling at the reference parameter sets.
  struct Case {
    const char* name;
    ChannelSpec channel;
    DensityMatrixd rho0;
    FreeStateOracle oracle;
    std::vector<double> taus;
  };
  const auto werner = FreeStateOracle::werner_separable();
  const Case cases[] = {
      {"dephasing", pure_dephasing(1.0), werner_state(0.5), werner, {0.5, 1.0, 2.0}},
      {"depolarising", pure_depolarising(), werner_state(0.9), werner, {0.25, 0.5, 1.0, 2.0}},
      {"dephasing-nm", nm_dephasing(), werner_state(0.5), werner, {1.0, 2.0, 4.0}},
      {"depolarising-nm", nm_depolarising(), werner_state(0.9), werner, {1.0, 2.0, 4.0}},
      {"thermal", thermalisation(), plus_y_state<double>(), reference_gibbs(), {0.1, 0.5, 1.0}},
  };
  const std::size_t points = fx.conventions.grid.points;
  const std::size_t doubled = 2 * (points - 1) + 1;
  for (const auto& c : cases) {
    double drift = 0.0;
    try {
      for (double tau : c.taus) {
        const auto a = fx.bounds(c.channel, c.rho0, c.oracle, tau, Framing::None, points);
        const auto b = fx.bounds(c.channel, c.rho0, c.oracle, tau, Framing::None, doubled);
        for (auto [x, y] : {std::pair{a.T_M, b.T_M}, {a.T_tilde, b.T_tilde}, {a.T_qsl, b.T_qsl}}) {
          drift = std::max(drift, std::abs(x - y) / tau);
        }
      }
      rec.expect(drift <= 1e-6, format("grid doubling %zu -> %zu points, %s: max |dT|/tau = %.2e (<= 1e-6)",
                                       points, doubled, c.name, drift));
    } catch (const std::exception& e) {
      rec.expect(false, format("grid doubling, %s: %s", c.name, e.what()));
    }
  }
}

DensityMatrixd random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealVector<double> p(4);
  for (Index i = 0; i < 4; ++i) p(i) = unit(rng) + 1e-3;
  p /= p.sum();
  const double r = std::sqrt(p(0) * p(3)) * unit(rng);
  const double phase = 2 * std::numbers::pi * unit(rng);
  ComplexMatrixd m = p.cast<std::complex<double>>().asDiagonal();
  m(0, 3) = std::polar(r, phase);
  m(3, 0) = std::conj(m(0, 3));
  return DensityMatrixd(m, {2, 2});
}

void check_oracles(const Fixture&, Recorder& rec) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  double worst = -kInfiniteBound;
  const auto gibbs = reference_gibbs();
  for (int i = 0; i < 100; ++i) {
    FreeStateOracle oracle = FreeStateOracle::incoherent();
    DensityMatrixd rho, other;
    if (i % 3 == 0) {
      rho = random_state(4, rng);
      other = random_state(4, rng);
    } else if (i % 3 == 1) {
      oracle = FreeStateOracle::werner_separable();
      rho = random_x_state(rng);
      other = random_x_state(rng);
    } else {
      oracle = gibbs;
      rho = random_state(2, rng);
      other = random_state(2, rng);
    }
    const double own = relative_entropy(rho, closest_free(oracle, rho));
    const double alt = relative_entropy(rho, closest_free(oracle, other));
    if (!(own <= alt + 1e-9)) ++violations;
    if (std::isfinite(alt)) worst = std::max(worst, own - alt);
  }
  rec.expect(violations == 0,
             format("minimizer optimality, 100 pairs: %zu violations, max S(rho||s(rho)) - S(rho||s(rho')) = %.2e",
                    violations, worst));

  const auto bell = separable_search(bell_state<double>());
  rec.expect(std::abs(bell.value - std::numbers::ln2) <= 1e-3,
             format("separable_search on Bell state: %.6f vs ln 2 = %.6f (gap %.1e)", bell.value,
                    std::numbers::ln2, bell.gap));
  const auto oracle = FreeStateOracle::werner_separable();
  for (double p : {0.3, 0.6}) {
    const auto rho = werner_state(p);
    const double dephased = resource_measure(oracle, rho);
    const auto found = separable_search(rho);
    rec.expect(found.value <= dephased + 1e-6,
               format("Werner p=%g: search %.6f <= dephased candidate %.6f + 1e-6", p, found.value,
                      dephased));
    if (dephased - found.value > 1e-4) {
      rec.note(format("evidence: a separable state %.4f nats closer than the dephased state "
                      "(relative reduction %.0f%%)",
                      dephased - found.value, 100.0 * (dephased - found.value) / dephased));
    }
  }
}

struct CheckSpec {
  int id;
  const char* name;
  double time_limit;
  bool full_only;
  void (*run)(const Fixture&, Recorder&);
};

constexpr CheckSpec kChecks[] = {
    {1, "pure dephasing tightness", 5.0, false, check_dephasing_tightness},
    {2, "pure depolarisation hierarchy", 5.0, false, check_depolarising_hierarchy},
    {3, "non-monotonic dephasing", 10.0, false, check_nm_dephasing},
    {4, "non-monotonic depolarisation", 10.0, false, check_nm_depolarising},
    {5, "thermalisation", 20.0, false, check_thermalisation},
    {6, "bound validity sweep", 60.0, true, check_validity_sweep},
    {7, "numerical cross-checks", 30.0, false, check_cross_checks},
    {8, "oracle optimality and separable search", 60.0, true, check_oracles},
};

}  // namespace

VerifyLevel verify_level_from_string(std::string_view name) {
  if (name == "fast") return VerifyLevel::Fast;
  if (name == "full") return VerifyLevel::Full;
  throw std::invalid_argument("verify level must be 'fast' or 'full'");
}

std::vector<CheckResult> run_checks(VerifyLevel level, const Conventions& conventions) {
  const Fixture fx{conventions};
  std::vector<CheckResult> results;
  for (const auto& spec : kChecks) {
    if (spec.full_only && level != VerifyLevel::Full) continue;
    CheckResult result{.id = spec.id, .name = spec.name, .passed = true, .seconds = 0.0, .time_limit = spec.time_limit, .details = {}};
    Recorder rec(result);
    const auto start = std::chrono::steady_clock::now();
    try {
      spec.run(fx, rec);
    } catch (const std::exception& e) {
      rec.expect(false, std::string("exception: ") + e.what());
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.expect(result.seconds < spec.time_limit,
               format("runtime %.2f s (< %.0f s)", result.seconds, spec.time_limit));
    results.push_back(std::move(result));
  }
  return results;
}

int verify_suite(VerifyLevel level, std::ostream& out, const Conventions& conventions) {
  bool all = true;
  for (const auto& r : run_checks(level, conventions)) {
    all = all && r.passed;
    out << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name << " ("
        << format("%.2f", r.seconds) << " s)\n";
    for (const auto& line : r.details) out << "      " << line << '\n';
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace rsl
