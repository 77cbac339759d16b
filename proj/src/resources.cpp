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

#include "rsl/resources.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rsl/states.hpp"

namespace rsl {

std::string_view to_string(FreeStateKind kind) {
  switch (kind) {
    case FreeStateKind::Incoherent:
      return "incoherent";
    case FreeStateKind::WernerSeparable:
      return "werner-separable";
    case FreeStateKind::Gibbs:
      return "gibbs";
    case FreeStateKind::FixedState:
      return "fixed";
  }
  return "unknown";
}

FreeStateOracle FreeStateOracle::incoherent() { return {FreeStateKind::Incoherent, {}}; }

FreeStateOracle FreeStateOracle::werner_separable() {
  return {FreeStateKind::WernerSeparable, {}};
}

FreeStateOracle FreeStateOracle::gibbs(double omega, double beta) {
  if (!(omega > 0.0 && beta > 0.0)) {
    throw std::invalid_argument("Gibbs oracle requires omega > 0 and beta > 0");
  }
  return {FreeStateKind::Gibbs, gibbs_state<double>(omega, beta)};
}

FreeStateOracle FreeStateOracle::fixed(DensityMatrixd sigma) {
  return {FreeStateKind::FixedState, std::move(sigma)};
}

bool in_werner_family(const DensityMatrixd& rho, double tol) {
  if (rho.dim() != 4 || rho.local_dims() != std::vector<Index>{2, 2}) return false;
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      if (i == j || (i == 0 && j == 3) || (i == 3 && j == 0)) continue;
      if (std::abs(rho(i, j)) > tol) return false;
    }
  }
  return true;
}

bool FreeStateOracle::supports(const DensityMatrixd& rho) const {
  switch (kind_) {
    case FreeStateKind::Incoherent:
      return true;
    case FreeStateKind::WernerSeparable:
      return in_werner_family(rho);
    case FreeStateKind::Gibbs:
    case FreeStateKind::FixedState:
      return rho.dim() == free_state_->dim();
  }
  return false;
}

bool FreeStateOracle::werner_direction(const DensityMatrixd& rho) const {
  return (kind_ == FreeStateKind::Incoherent || kind_ == FreeStateKind::WernerSeparable) &&
         in_werner_family(rho);
}

std::string FreeStateOracle::name() const { return std::string(to_string(kind_)); }

DensityMatrixd closest_free(const FreeStateOracle& oracle, const DensityMatrixd& rho) {
  switch (oracle.kind()) {
    case FreeStateKind::Incoherent:
      return dephase(rho);
    case FreeStateKind::WernerSeparable:
      if (!in_werner_family(rho)) {
        throw UnsupportedState(
            "werner-separable oracle only covers two-qubit states with a single "
            "|00><11| coherence; use separable_search for general states");
      }
      return dephase(rho);
    case FreeStateKind::Gibbs:
    case FreeStateKind::FixedState:
      if (rho.dim() != oracle.free_state()->dim()) {
        throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) +
                                " does not match the free state of the " + oracle.name() +
                                " oracle");
      }
      return *oracle.free_state();
  }
  throw std::logic_error("unhandled oracle kind");
}

double resource_measure(const FreeStateOracle& oracle, const DensityMatrixd& rho,
                        double floor) {
  return relative_entropy(rho, closest_free(oracle, rho), floor);
}

void SearchConfig::validate(Index dim) const {
  if (restarts < 1) throw std::invalid_argument("search needs at least one restart");
  if (iterations < 1) throw std::invalid_argument("search needs at least one iteration");
  if (mixture_size < static_cast<std::size_t>(dim * dim)) {
    throw std::invalid_argument("mixture_size must be at least dim^2 = " +
                                std::to_string(dim * dim));
  }
  if (!(tolerance > 0.0 && tolerance <= 1e-2)) {
    throw std::invalid_argument("search tolerance must lie in (0, 1e-2]");
  }
}

namespace {

using Vector2 = Eigen::Vector2cd;
using Matrix2 = Eigen::Matrix2cd;

constexpr int kInnerIterations = 50;
constexpr double kInnerTolerance = 1e-10;
constexpr double kObjectiveFloor = 1e-14;

struct Atom {
  Vector2 a;
  Vector2 b;
  ComplexMatrixd projector;
  double weight = 0.0;
};

ComplexMatrixd product_projector(const Vector2& a, const Vector2& b) {
  const ComplexMatrixd pa = a * a.adjoint();
  const ComplexMatrixd pb = b * b.adjoint();
  return kron<double>(pa, pb);
}

Atom make_atom(Vector2 a, Vector2 b, double weight) {
  a.normalize();
  b.normalize();
  return {a, b, product_projector(a, b), weight};
}

// -Tr[rho log sigma] with a tiny eigenvalue floor; the search minimizes this
// (the entropy of rho is a constant offset).
double cross_entropy(const ComplexMatrixd& rho, const ComplexMatrixd& sigma) {
  const auto es = hermitian_eigen<double>(sigma);
  const ComplexMatrixd r = es.eigenvectors().adjoint() * rho * es.eigenvectors();
  double value = 0.0;
  for (Index i = 0; i < r.rows(); ++i) {
    value -= r(i, i).real() * std::log(std::max(es.eigenvalues()(i), kObjectiveFloor));
  }
  return value;
}

// Frechet derivative of log at sigma applied to x.
ComplexMatrixd log_derivative(const ComplexMatrixd& sigma, const ComplexMatrixd& x) {
  const auto es = hermitian_eigen<double>(sigma);
  const auto& u = es.eigenvectors();
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(kObjectiveFloor);
  ComplexMatrixd y = u.adjoint() * x * u;
  for (Index i = 0; i < y.rows(); ++i) {
    for (Index j = 0; j < y.cols(); ++j) {
      const double a = s(i), b = s(j);
      const double dd = std::abs(a - b) <= 1e-10 * std::max(a, b)
                            ? 2.0 / (a + b)
                            : (std::log(a) - std::log(b)) / (a - b);
      y(i, j) *= dd;
    }
  }
  return u * y * u.adjoint();
}

Vector2 top_eigenvector(const Matrix2& m) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (m + m.adjoint()));
  return es.eigenvectors().col(1);
}

double product_expectation(const ComplexMatrixd& z, const Vector2& a, const Vector2& b) {
  const Eigen::Vector4cd v = kron<double>(ComplexMatrixd(a), ComplexMatrixd(b));
  return (v.adjoint() * z * v)(0, 0).real();
}

// Maximizes <ab|z|ab> over product unit vectors by alternating top-eigenvector
// updates of the two 2x2 conditional matrices, from several starting points.
std::pair<Atom, double> best_product(const ComplexMatrixd& z, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<Vector2> starts = {Vector2(1, 0), Vector2(0, 1), Vector2(1, 1),
                                 Vector2(std::complex<double>(1, 0), std::complex<double>(0, 1))};
  for (int r = 0; r < 2; ++r) {
    starts.emplace_back(std::complex<double>(normal(rng), normal(rng)),
                        std::complex<double>(normal(rng), normal(rng)));
  }

  Vector2 best_a, best_b;
  double best = -std::numeric_limits<double>::infinity();
  for (Vector2 b : starts) {
    b.normalize();
    Vector2 a;
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < kInnerIterations; ++it) {
      Matrix2 conditional_a = Matrix2::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              conditional_a(i, j) += std::conj(b(k)) * z(2 * i + k, 2 * j + l) * b(l);
      a = top_eigenvector(conditional_a);

      Matrix2 conditional_b = Matrix2::Zero();
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              conditional_b(k, l) += std::conj(a(i)) * z(2 * i + k, 2 * j + l) * a(j);
      b = top_eigenvector(conditional_b);

      const double next = product_expectation(z, a, b);
      const bool done = next - value <= kInnerTolerance;
      value = next;
      if (done) break;
    }
    if (value > best) {
      best = value;
      best_a = a;
      best_b = b;
    }
  }
  return {make_atom(best_a, best_b, 0.0), best};
}

ComplexMatrixd mixture(const std::vector<Atom>& atoms) {
  ComplexMatrixd sigma = ComplexMatrixd::Zero(4, 4);
  for (const auto& atom : atoms) sigma += atom.weight * atom.projector;
  return sigma;
}

// Minimizes phi on [0, upper] for convex phi.
std::pair<double, double> line_search(const std::function<double(double)>& phi,
                                      double upper) {
  const auto [x, fx] = boost::math::tools::brent_find_minima(phi, 0.0, upper, 40);
  const double f0 = phi(0.0);
  const double fu = phi(upper);
  if (f0 <= fx && f0 <= fu) return {0.0, f0};
  if (fu < fx) return {upper, fu};
  return {x, fx};
}

bool same_atom(const Atom& x, const Atom& y) {
  return std::abs(x.a.dot(y.a)) > 1.0 - 1e-12 && std::abs(x.b.dot(y.b)) > 1.0 - 1e-12;
}

struct RestartResult {
  ComplexMatrixd sigma;
  double objective = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t iterations = 0;
};

RestartResult run_restart(const ComplexMatrixd& rho, std::vector<Atom> atoms,
                          const SearchConfig& config, std::mt19937_64& rng) {
  RestartResult result;
  ComplexMatrixd sigma = mixture(atoms);
  double objective = cross_entropy(rho, sigma);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    result.iterations = it + 1;
    const ComplexMatrixd z = log_derivative(sigma, rho);
    auto [toward, toward_value] = best_product(z, rng);
    const double gap = toward_value - trace_product<double>(z, sigma);
    result.gap = gap;
    if (gap <= config.tolerance) {
      result.converged = true;
      break;
    }

    std::size_t away = 0;
    double away_value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const double v = product_expectation(z, atoms[k].a, atoms[k].b);
      if (v < away_value) {
        away_value = v;
        away = k;
      }
    }

    // Pairwise step: move weight from the worst active atom to the new one.
    const ComplexMatrixd pairwise = toward.projector - atoms[away].projector;
    auto [step, value] = line_search(
        [&](double g) { return cross_entropy(rho, sigma + g * pairwise); },
        atoms[away].weight);
    bool use_pairwise = value < objective;
    double fw_step = 0.0;
    if (!use_pairwise) {
      const ComplexMatrixd direction = toward.projector - sigma;
      std::tie(fw_step, value) = line_search(
          [&](double g) { return cross_entropy(rho, sigma + g * direction); }, 1.0);
      if (!(value < objective)) break;  // no descent left at this precision
    }

    auto existing = std::find_if(atoms.begin(), atoms.end(),
                                 [&](const Atom& x) { return same_atom(x, toward); });
    if (existing == atoms.end()) {
      atoms.push_back(toward);
      existing = atoms.end() - 1;
    }
    const std::size_t toward_index = static_cast<std::size_t>(existing - atoms.begin());
    if (use_pairwise) {
      atoms[away].weight -= step;
      atoms[toward_index].weight += step;
    } else {
      for (auto& atom : atoms) atom.weight *= (1.0 - fw_step);
      atoms[toward_index].weight += fw_step;
    }

    std::erase_if(atoms, [](const Atom& x) { return x.weight <= 1e-15; });
    if (atoms.size() > config.mixture_size) {
      auto smallest = std::min_element(
          atoms.begin(), atoms.end(),
          [](const Atom& x, const Atom& y) { return x.weight < y.weight; });
      atoms.erase(smallest);
    }
    double total = 0.0;
    for (const auto& atom : atoms) total += atom.weight;
    for (auto& atom : atoms) atom.weight /= total;

    sigma = mixture(atoms);
    objective = cross_entropy(rho, sigma);
  }
  result.sigma = sigma;
  result.objective = objective;
  return result;
}

}  // namespace

SearchResult separable_search(const DensityMatrixd& rho, const SearchConfig& config) {
  if (rho.local_dims() != std::vector<Index>{2, 2}) {
    throw DimensionMismatch("separable_search requires a two-qubit state (local dims [2, 2])");
  }
  config.validate(rho.dim());

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  auto random_vector = [&] {
    return Vector2(std::complex<double>(normal(rng), normal(rng)),
                   std::complex<double>(normal(rng), normal(rng)));
  };

  SearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::vector<Atom> atoms;
    if (r == 0) {
      // Start from the (slightly mixed) dephased state: computational-basis
      // product states weighted by the diagonal of rho.
      const double mix = 1e-3;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double p = (1.0 - mix) * rho(2 * i + j, 2 * i + j).real() + mix / 4.0;
          atoms.push_back(make_atom(Vector2::Unit(i), Vector2::Unit(j), p));
        }
      }
    } else {
      double total = 0.0;
      for (std::size_t k = 0; k < config.mixture_size; ++k) {
        atoms.push_back(make_atom(random_vector(), random_vector(), uniform(rng)));
        total += atoms.back().weight;
      }
      for (auto& atom : atoms) atom.weight /= total;
    }

    RestartResult restart = run_restart(rho.matrix(), std::move(atoms), config, rng);
    const DensityMatrixd sigma(hermitian_part(restart.sigma), {2, 2});
    const double value = relative_entropy(rho, sigma);
    if (value < best.value) {
      best.sigma = sigma;
      best.value = value;
      best.gap = restart.gap;
      best.converged = restart.converged;
      best.iterations = restart.iterations;
    }
  }
  return best;
}

}  // namespace rsl
