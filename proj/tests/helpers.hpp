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

#include <random>
#include <utility>
#include <vector>

#include "rsl/dynamics.hpp"
#include "rsl/qcore.hpp"

namespace rsl::test {

/// Ginibre-distributed mixed state; rank-deficient when `rank` < dim.
inline DensityMatrixd random_state(Index dim, std::mt19937_64& rng, Index rank = 0) {
  std::normal_distribution<double> normal;
  const Index cols = rank > 0 ? rank : dim;
  ComplexMatrixd g(dim, cols);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  const ComplexMatrixd m = g * g.adjoint();
  std::vector<Index> dims;
  if (dim == 4) dims = {2, 2};
  return DensityMatrixd(ComplexMatrixd(m / m.trace().real()), dims);
}

inline ComplexMatrixd random_hermitian(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrixd g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  return (g + g.adjoint()) / 2.0;
}

/// exp(-i H t) for Hermitian H.
inline ComplexMatrixd propagator(const ComplexMatrixd& h, double t) {
  const auto es = hermitian_eigen<double>(h);
  ComplexVectord phases(h.rows());
  for (Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(i) * t));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// rho_t = U rho_0 U^dagger with its exact derivative -i[H, rho_t].
inline Trajectory unitary_trajectory(const ComplexMatrixd& h, const DensityMatrixd& rho0,
                                     double tau, const GridOptions& options = {}) {
  const auto eval = [&](double t) {
    const ComplexMatrixd u = propagator(h, t);
    const ComplexMatrixd rho = u * rho0.matrix() * u.adjoint();
    const ComplexMatrixd drho = std::complex<double>(0.0, -1.0) * (h * rho - rho * h);
    return std::pair{rho, drho};
  };
  return tabulate_trajectory(TimeGrid::make(tau, options), eval, rho0.local_dims());
}

}  // namespace rsl::test
