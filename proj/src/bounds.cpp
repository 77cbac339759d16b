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

#include "rsl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rsl/errors.hpp"

namespace rsl {

namespace {

// Numerators and averages below this are treated as exactly zero.
constexpr double kNegligible = 1e-12;
// Smallest eigenvalue at which a free state counts as full rank.
constexpr double kSingular = 1e-10;

double ratio(double numerator, double denominator) {
  const double num = std::abs(numerator);
  if (num <= kNegligible) return 0.0;
  if (!(denominator > 0.0)) return kInfiniteBound;
  return num / denominator;
}

double richardson(const std::function<double(double)>& f, double eps) {
  return (8.0 * f(eps / 4.0) - 6.0 * f(eps / 2.0) + f(eps)) / 3.0;
}

// Eigenvalue-floored log without the (0, 1e-6] restriction on the floor, so
// that regularization parameters up to 1e-3 can be used.
ComplexMatrixd log_clamped(const ComplexMatrixd& m, double floor) {
  return hermitian_function<double>(m, [floor](double x) { return std::log(std::max(x, floor)); });
}

double min_eigenvalue(const ComplexMatrixd& m) {
  return hermitian_eigen<double>(m).eigenvalues().minCoeff();
}

// samples_i = Tr[L_i X].
std::vector<double> rate_samples(const Trajectory& traj, const ComplexMatrixd& x) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out[i] = trace_product<double>(traj.derivatives[i].matrix(), x);
  }
  return out;
}

double rate_average(const Trajectory& traj, const ComplexMatrixd& x) {
  return time_average(rate_samples(traj, x), traj.grid);
}

void check_trajectory(const Trajectory& traj) {
  if (traj.size() < 2 || traj.derivatives.size() != traj.size() ||
      traj.grid.size() != traj.size()) {
    throw std::invalid_argument("trajectory needs at least two samples with derivatives");
  }
  if (!(traj.duration() > 0.0)) throw std::invalid_argument("trajectory duration must be > 0");
}

// Almost-free state at distance eps from sigma: along the |00><11| coherence
// for the two-qubit Werner family, otherwise by flooring eigenvalues at eps.
ComplexMatrixd almost_free_log(const ComplexMatrixd& sigma, double eps, bool werner,
                               double floor) {
  if (werner) {
    ComplexMatrixd s = sigma;
    s(0, 3) += eps;
    s(3, 0) += eps;
    if (min_eigenvalue(s) >= -1e-14) return log_clamped(s, floor);
  }
  return log_clamped(sigma, eps);
}

// Integral over u in [0, m] of |p(u)|, p the polynomial through v at
// u = 0, 1, ..., m. Panels without a sign change use the closed rule
// `coeffs`; otherwise p is split at its roots and each piece integrated
// with two-point Gauss-Legendre, which is exact for m <= 3.
double abs_panel_integral(std::span<const double> v, std::span<const double> coeffs) {
  bool positive = false, negative = false;
  for (double x : v) {
    positive = positive || x > 0.0;
    negative = negative || x < 0.0;
  }
  if (!(positive && negative)) {
    double sum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) sum += coeffs[j] * std::abs(v[j]);
    return sum;
  }
  const auto m = static_cast<double>(v.size() - 1);
  const auto p = [&](double u) {
    double sum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      double l = 1.0;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k != j) l *= (u - double(k)) / (double(j) - double(k));
      }
      sum += v[j] * l;
    }
    return sum;
  };
  std::vector<double> cuts{0.0};
  constexpr int kScan = 64;
  for (int i = 0; i < kScan; ++i) {
    double lo = m * i / kScan, hi = m * (i + 1) / kScan;
    const bool below = p(lo) < 0.0;
    if (below == (p(hi) < 0.0)) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((p(mid) < 0.0) == below ? lo : hi) = mid;
    }
    cuts.push_back(0.5 * (lo + hi));
  }
  cuts.push_back(m);
  const double node = 0.5 / std::sqrt(3.0);
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1], b = cuts[i], c = 0.5 * (a + b), h = b - a;
    sum += 0.5 * h * std::abs(p(c - node * h) + p(c + node * h));
  }
  return sum;
}

}  // namespace

double time_average(std::span<const double> samples, std::span<const double> times) {
  if (samples.size() != times.size() || samples.size() < 2) {
    throw std::invalid_argument("time_average needs matching samples and times (>= 2)");
  }
  const double tau = times.back() - times.front();
  if (!(tau > 0.0)) throw std::invalid_argument("time_average over an empty interval");
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    sum += 0.5 * (times[i] - times[i - 1]) * (std::abs(samples[i]) + std::abs(samples[i - 1]));
  }
  return sum / tau;
}

double time_average(std::span<const double> samples, const TimeGrid& grid) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("time_average: sample count does not match grid");
  }
  const auto& w = grid.weights();
  if (!grid.rule()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (w[i] != 0.0) sum += w[i] * std::abs(samples[i]);
    }
    return sum / grid.duration();
  }

  // Integrate g(s) = f(t(s)) dt/ds panel by panel in the parameter s. A zero
  // Jacobian may sit on a divergent sample (rate at t = 0 on the graded grid).
  const auto& jac = grid.jacobian();
  std::vector<double> g(samples.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = jac[i] == 0.0 ? 0.0 : samples[i] * jac[i];

  static constexpr double kTrapezoid[] = {0.5, 0.5};
  static constexpr double kSimpson[] = {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
  static constexpr double kThreeEighths[] = {3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0};
  const std::size_t n = g.size() - 1;
  double sum = 0.0;
  const auto panel = [&](std::size_t first, std::span<const double> coeffs) {
    sum += abs_panel_integral(std::span(g).subspan(first, coeffs.size()), coeffs);
  };
  if (*grid.rule() == QuadratureRule::Trapezoid || n < 2) {
    for (std::size_t i = 0; i < n; ++i) panel(i, kTrapezoid);
  } else {
    const std::size_t simpson_end = n % 2 == 0 ? n : n - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) panel(i, kSimpson);
    if (simpson_end != n) panel(simpson_end, kThreeEighths);
  }
  return sum * grid.parameter_step() / grid.duration();
}

BoundDetail bound_TM_detail(const Trajectory& traj, const FreeStateOracle& oracle,
                            double floor) {
  check_trajectory(traj);
  BoundDetail out;
  const double m0 = resource_measure(oracle, traj.initial(), floor);
  const double mt = resource_measure(oracle, traj.final(), floor);
  if (!std::isfinite(m0) || !std::isfinite(mt)) {
    out.time = kInfiniteBound;
    out.change = mt - m0;
    out.diagnostic = "resource measure is infinite at an endpoint";
    return out;
  }
  out.change = mt - m0;
  out.selector = out.change <= 0.0 ? traj.duration() : 0.0;
  const auto& rho_x = out.selector == 0.0 ? traj.initial() : traj.final();
  const ComplexMatrixd log_sigma = matrix_log_floor(closest_free(oracle, rho_x), floor).matrix();

  std::vector<double> samples(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.grid.weights()[i] == 0.0) continue;
    samples[i] = -trace_product<double>(traj.derivatives[i].matrix(), log_sigma) -
                 entropy_rate(traj.states[i], traj.derivatives[i], floor);
  }
  out.time = ratio(out.change, time_average(samples, traj.grid));
  return out;
}

double bound_TM(const Trajectory& traj, const FreeStateOracle& oracle, double floor) {
  return bound_TM_detail(traj, oracle, floor).time;
}

BoundDetail bound_Ttilde_detail(const Trajectory& traj, const FreeStateOracle& oracle,
                                double epsilon, double floor) {
  check_trajectory(traj);
  check_floor(floor);
  if (epsilon < 0.0 || epsilon > 1e-3) {
    throw std::invalid_argument("epsilon must lie in [0, 1e-3]");
  }
  const double tau = traj.duration();
  const ComplexMatrixd& rho0 = traj.initial().matrix();
  const ComplexMatrixd& rhot = traj.final().matrix();
  const ComplexMatrixd sigma0 = closest_free(oracle, traj.initial()).matrix();
  const ComplexMatrixd sigmat = closest_free(oracle, traj.final()).matrix();

  BoundDetail out;
  // Delta M + Delta S = -Tr[rho_tau log sigma_tau] + Tr[rho_0 log sigma_0].
  const auto evaluate = [&](const ComplexMatrixd& log0, const ComplexMatrixd& logt,
                            BoundDetail& d) {
    d.change = -trace_product<double>(rhot, logt) + trace_product<double>(rho0, log0);
    d.selector = d.change <= 0.0 ? tau : 0.0;
    const double avg = rate_average(traj, d.selector == 0.0 ? log0 : logt);
    return std::pair{d.change, avg};
  };

  const ComplexMatrixd log0 = log_clamped(sigma0, floor);
  const ComplexMatrixd logt = log_clamped(sigmat, floor);
  const auto [num, den] = evaluate(log0, logt, out);
  const ComplexMatrixd& sigma_x = out.selector == 0.0 ? sigma0 : sigmat;
  const bool singular = min_eigenvalue(sigma_x) <= kSingular;
  const bool indeterminate = std::abs(num) <= kNegligible && den <= kNegligible;

  if ((singular || indeterminate) && epsilon > 0.0) {
    const bool werner0 = oracle.werner_direction(traj.initial());
    const bool wernert = oracle.werner_direction(traj.final());
    BoundDetail scratch;
    const auto f = [&](double eps) {
      const auto [n, d] = evaluate(almost_free_log(sigma0, eps, werner0, floor),
                                   almost_free_log(sigmat, eps, wernert, floor), scratch);
      return d > 0.0 ? std::abs(n) / d : 0.0;
    };
    out.time = std::max(0.0, richardson(f, epsilon));
    out.epsilon_used = epsilon;
    out.selector = scratch.selector;
    out.diagnostic = singular ? "closest free state is singular; extrapolated eps -> 0"
                              : "0/0 quotient; extrapolated eps -> 0";
    return out;
  }
  out.time = ratio(num, den);
  if (singular) out.diagnostic = "closest free state is singular; regularization disabled";
  return out;
}

double bound_Ttilde(const Trajectory& traj, const FreeStateOracle& oracle, double epsilon,
                    double floor) {
  return bound_Ttilde_detail(traj, oracle, epsilon, floor).time;
}

double bound_Tg(const Trajectory& traj, const DensityMatrixd& sigma, double floor) {
  check_trajectory(traj);
  if (sigma.dim() != traj.initial().dim()) throw DimensionMismatch("free state dimension");
  if (max_norm_distance(traj.initial(), sigma) > 1e-8) {
    throw PreconditionViolation("generation bound requires rho_0 = sigma");
  }
  const ComplexMatrixd log_sigma = matrix_log_floor(sigma, floor).matrix();
  const double delta_s = von_neumann_entropy(traj.final()) - von_neumann_entropy(traj.initial());
  // S(rho_tau||sigma) with the floored logarithm, so a singular sigma stays finite.
  const double qre = -von_neumann_entropy(traj.final()) -
                     trace_product<double>(traj.final().matrix(), log_sigma);
  return ratio(qre + delta_s, rate_average(traj, log_sigma));
}

BoundDetail bound_Td_detail(const Trajectory& traj, const DensityMatrixd& sigma,
                            double floor) {
  check_trajectory(traj);
  if (sigma.dim() != traj.initial().dim()) throw DimensionMismatch("free state dimension");
  BoundDetail out;
  const double qre = relative_entropy(traj.initial(), sigma, floor);
  const double delta_s = von_neumann_entropy(traj.final()) - von_neumann_entropy(traj.initial());
  out.change = qre - delta_s;
  if (!std::isfinite(qre)) {
    out.time = kInfiniteBound;
    out.diagnostic = "S(rho_0||sigma) is infinite";
    return out;
  }
  out.time = ratio(out.change, rate_average(traj, matrix_log_floor(sigma, floor).matrix()));
  return out;
}

double bound_Td(const Trajectory& traj, const DensityMatrixd& sigma, double floor) {
  return bound_Td_detail(traj, sigma, floor).time;
}

BoundDetail bound_qsl_detail(const Trajectory& traj, double floor, double epsilon) {
  check_trajectory(traj);
  check_floor(floor);
  BoundDetail out;
  const auto& rho0 = traj.initial();
  const auto& rhot = traj.final();
  if (max_norm_distance(rho0, rhot) <= kNegligible) return out;

  // Both directions reduce to |Tr[(rho_tau - rho_0) log b]| / <|Tr[L log b]|>,
  // with b = rho_tau for T(rho_0, rho_tau) and b = rho_0 for T(rho_tau, rho_0).
  const ComplexMatrixd change = rhot.matrix() - rho0.matrix();
  const auto direction = [&](const DensityMatrixd& a, const DensityMatrixd& b,
                             std::string_view label) -> std::optional<double> {
    if (!std::isfinite(relative_entropy(a, b, floor))) {
      if (!out.diagnostic.empty()) out.diagnostic += "; ";
      out.diagnostic += std::string(label) + " dropped (infinite relative entropy)";
      return std::nullopt;
    }
    const auto f = [&](double eps) {
      const ComplexMatrixd log_b = log_clamped(b.matrix(), eps);
      return ratio(trace_product<double>(change, log_b), rate_average(traj, log_b));
    };
    if (epsilon > 0.0 && min_eigenvalue(b.matrix()) <= kSingular) {
      out.epsilon_used = epsilon;
      return std::max(0.0, richardson(f, epsilon));
    }
    return f(floor);
  };

  const auto forward = direction(rho0, rhot, "T(rho_0, rho_tau)");
  const auto reverse = direction(rhot, rho0, "T(rho_tau, rho_0)");
  if (!forward && !reverse) {
    out.time = kInfiniteBound;
    return out;
  }
  out.time = std::max(forward.value_or(0.0), reverse.value_or(0.0));
  return out;
}

double bound_qsl(const Trajectory& traj, double floor, double epsilon) {
  return bound_qsl_detail(traj, floor, epsilon).time;
}

BoundReport evaluate_bounds(const Trajectory& traj, const FreeStateOracle& oracle,
                            const BoundOptions& options) {
  check_trajectory(traj);
  BoundReport report;
  report.tau = traj.duration();
  report.quadrature_points = traj.size();
  report.delta_S = von_neumann_entropy(traj.final()) - von_neumann_entropy(traj.initial());

  const auto tm = bound_TM_detail(traj, oracle, options.floor);
  report.delta_M = tm.change;
  report.T_M = tm.time;
  report.x_M = tm.selector;
  if (!tm.diagnostic.empty()) report.diagnostics.push_back("T_M: " + tm.diagnostic);

  const auto tt = bound_Ttilde_detail(traj, oracle, options.epsilon, options.floor);
  report.T_tilde = tt.time;
  report.x_tilde = tt.selector;
  report.epsilon_used = tt.epsilon_used;
  if (!tt.diagnostic.empty()) report.diagnostics.push_back("T_tilde: " + tt.diagnostic);

  const auto qsl = bound_qsl_detail(traj, options.floor, options.epsilon);
  report.T_qsl = qsl.time;
  if (!qsl.diagnostic.empty()) report.diagnostics.push_back("T_qsl: " + qsl.diagnostic);

  if (options.framing == Framing::Generation || options.framing == Framing::Both) {
    report.T_g = bound_Tg(traj, traj.initial(), options.floor);
  }
  if (options.framing == Framing::Degradation || options.framing == Framing::Both) {
    const auto td = bound_Td_detail(traj, traj.final(), options.floor);
    report.T_d = td.time;
    if (!td.diagnostic.empty()) report.diagnostics.push_back("T_d: " + td.diagnostic);
  }
  return report;
}

MinTimeResult min_time_mu(const ChannelSpec& channel, const FreeStateOracle& oracle,
                          std::span<const DensityMatrixd> family, double mu, double tau_max,
                          std::size_t scan_points, const GridOptions& grid, double floor) {
  if (family.empty()) throw std::invalid_argument("min_time_mu: empty family");
  if (mu == 0.0 || !std::isfinite(mu)) throw std::invalid_argument("min_time_mu: mu must be non-zero");
  if (!(tau_max > 0.0)) throw std::invalid_argument("min_time_mu: tau_max must be > 0");
  if (scan_points < 3) throw std::invalid_argument("min_time_mu: scan_points must be >= 3");
  channel.validate();

  const GridOptions scan{.points = scan_points,
                         .spacing = GridSpacing::Uniform,
                         .rule = QuadratureRule::Trapezoid,
                         .substeps = grid.substeps};
  MinTimeResult best;
  for (std::size_t f = 0; f < family.size(); ++f) {
    const auto& rho0 = family[f];
    const double m0 = resource_measure(oracle, rho0, floor);
    const auto gap = [&](const DensityMatrixd& rho) {
      return resource_measure(oracle, rho, floor) - m0 - mu;
    };
    const Trajectory coarse = make_trajectory(channel, rho0, tau_max, scan);
    const auto& times = coarse.grid.times();

    std::vector<double> gaps(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) gaps[i] = gap(coarse.states[i]);
    std::optional<std::size_t> crossing, touch;
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!touch && std::abs(gaps[i]) <= kMuTolerance) touch = i;
      if ((gaps[i - 1] < 0.0) != (gaps[i] < 0.0)) {
        crossing = i;
        break;
      }
    }
    // A grazing approach well before any crossing counts as reaching mu.
    std::optional<double> hit;
    if (touch && (!crossing || *touch + 1 < *crossing)) {
      hit = times[*touch];
    } else if (crossing) {
      const bool below = gaps[*crossing - 1] < 0.0;
      double lo = times[*crossing - 1], hi = times[*crossing];
      for (int it = 0; it < 60 && hi - lo > 1e-13 * tau_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((gap(state_at(channel, rho0, mid)) < 0.0) == below ? lo : hi) = mid;
      }
      hit = hi;
    }
    if (!hit) continue;

    const Trajectory segment = make_trajectory(channel, rho0, *hit, grid);
    const double t = bound_TM(segment, oracle, floor);
    if (!best.initial || t < best.T_mu) {
      best.T_mu = t;
      best.initial = rho0;
      best.final = segment.final();
      best.duration = *hit;
      best.family_index = f;
    }
  }
  return best;
}

}  // namespace rsl
