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

// Named operators and states used throughout: Pauli matrices, Bell and
// Werner states, thermal (Gibbs) qubit states.

#include <cmath>
#include <complex>

#include "rsl/qcore.hpp"

namespace rsl {

template <typename Real>
ComplexMatrix<Real> pauli_x() {
  ComplexMatrix<Real> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real>
ComplexMatrix<Real> pauli_y() {
  const std::complex<Real> i(0, 1);
  ComplexMatrix<Real> m(2, 2);
  m << 0, -i, i, 0;
  return m;
}

template <typename Real>
ComplexMatrix<Real> pauli_z() {
  ComplexMatrix<Real> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// |index><index| on a register with the given local dimensions.
template <typename Real>
DensityMatrix<Real> basis_state(Index index, std::vector<Index> local_dims) {
  Index dim = 1;
  for (Index d : local_dims) dim *= d;
  ComplexVector<Real> v = ComplexVector<Real>::Zero(dim);
  v(index) = 1;
  return DensityMatrix<Real>::pure(v, std::move(local_dims));
}

/// |phi+> = (|00> + |11>)/sqrt(2).
template <typename Real>
ComplexVector<Real> phi_plus_vector() {
  ComplexVector<Real> v = ComplexVector<Real>::Zero(4);
  v(0) = v(3) = Real(1) / std::sqrt(Real(2));
  return v;
}

template <typename Real>
DensityMatrix<Real> bell_state() {
  return DensityMatrix<Real>::pure(phi_plus_vector<Real>(), {2, 2});
}

/// p/4 * I + (1 - p) |phi+><phi+|, p in [0, 1].
template <typename Real>
DensityMatrix<Real> werner_state(Real p) {
  if (!(p >= Real(0) && p <= Real(1))) {
    throw std::invalid_argument("Werner mixing parameter must lie in [0, 1]");
  }
  const ComplexVector<Real> phi = phi_plus_vector<Real>();
  ComplexMatrix<Real> m = (p / Real(4)) * ComplexMatrix<Real>::Identity(4, 4) +
                          (Real(1) - p) * (phi * phi.adjoint());
  return DensityMatrix<Real>(m, {2, 2});
}

/// (I + sigma_y)/2.
template <typename Real>
DensityMatrix<Real> plus_y_state() {
  return DensityMatrix<Real>(
      ComplexMatrix<Real>((ComplexMatrix<Real>::Identity(2, 2) + pauli_y<Real>()) / Real(2)),
      {2});
}

/// exp(-beta * omega * sigma_z) / Z.
template <typename Real>
DensityMatrix<Real> gibbs_state(Real omega, Real beta) {
  // Populations written relative to the lower level to avoid overflow.
  const Real ratio = std::exp(-Real(2) * beta * omega);  // p_up / p_down
  RealVector<Real> p(2);
  p << ratio / (Real(1) + ratio), Real(1) / (Real(1) + ratio);
  return DensityMatrix<Real>::diagonal(p, {2});
}

}  // namespace rsl
