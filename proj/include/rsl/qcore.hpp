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

// Dense complex matrix calculus for small quantum systems (dim <= 16):
// validated state types, spectral functions, entropies and the quantum
// relative entropy. Everything is templated on the real scalar; the rest of
// the library uses the double instantiation (DensityMatrixd, ...).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rsl/errors.hpp"

namespace rsl {

using Index = Eigen::Index;

template <typename Real>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
struct StateTolerance {
  static constexpr Real hermitian = Real(1e-12);
  static constexpr Real trace = Real(1e-10);
  static constexpr Real psd = Real(1e-10);
  /// Overlap of rho with the null space of sigma above which the relative
  /// entropy is reported as +inf.
  static constexpr Real support = Real(1e-10);
};

inline constexpr double kDefaultLogFloor = 1e-12;
inline constexpr double kMaxLogFloor = 1e-6;

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0)
                       : m.cwiseAbs().maxCoeff();
}

/// Largest entrywise deviation from Hermiticity.
template <typename Derived>
typename Derived::RealScalar hermiticity_error(
    const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return ComplexMatrix<Real>(Real(0.5) * (m + m.adjoint()));
}

template <typename Real>
std::vector<Index> checked_local_dims(Index dim, std::vector<Index> local_dims) {
  if (local_dims.empty()) return {dim};
  Index product = 1;
  for (Index d : local_dims) {
    if (d < 1) throw DimensionMismatch("local dimension must be positive");
    product *= d;
  }
  if (product != dim) {
    throw DimensionMismatch("product of local dimensions " +
                            std::to_string(product) +
                            " does not match matrix dimension " +
                            std::to_string(dim));
  }
  return local_dims;
}

/// Hermitian matrix, symmetrized on construction.
template <typename Real>
class HermitianOperator {
 public:
  using Matrix = ComplexMatrix<Real>;

  HermitianOperator() = default;

  explicit HermitianOperator(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("operator is not square");
    const Real scale = std::max(Real(1), max_abs(m));
    if (hermiticity_error(m) > StateTolerance<Real>::hermitian * scale) {
      throw InvalidState("operator is not Hermitian (error " +
                         std::to_string(double(hermiticity_error(m))) + ")");
    }
    m_ = hermitian_part(m);
  }

  static HermitianOperator zero(Index dim) {
    return HermitianOperator(Matrix::Zero(dim, dim));
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  std::complex<Real> operator()(Index i, Index j) const { return m_(i, j); }
  std::complex<Real> trace() const { return m_.trace(); }

 private:
  Matrix m_;
};

/// Hermitian, unit-trace, positive semidefinite matrix together with the
/// dimensions of its tensor factors.
template <typename Real>
class DensityMatrix {
 public:
  using Matrix = ComplexMatrix<Real>;
  using Vector = ComplexVector<Real>;

  DensityMatrix() = default;

  explicit DensityMatrix(const Matrix& m, std::vector<Index> local_dims = {}) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw DimensionMismatch("density matrix must be square and non-empty");
    }
    const Real herm = hermiticity_error(m);
    if (!(herm <= StateTolerance<Real>::hermitian)) {
      throw InvalidState("state is not Hermitian (error " +
                         std::to_string(double(herm)) + ")");
    }
    const std::complex<Real> tr = m.trace();
    if (!(std::abs(tr - std::complex<Real>(1)) <= StateTolerance<Real>::trace)) {
      throw InvalidState("state trace " + std::to_string(double(tr.real())) +
                         " differs from 1");
    }
    m_ = hermitian_part(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() >= -StateTolerance<Real>::psd)) {
      throw InvalidState("state has negative eigenvalue " +
                         std::to_string(double(es.eigenvalues().minCoeff())));
    }
    local_dims_ = checked_local_dims<Real>(m_.rows(), std::move(local_dims));
  }

  static DensityMatrix pure(const Vector& psi, std::vector<Index> local_dims = {}) {
    const Real n = psi.norm();
    if (n == Real(0)) throw InvalidState("zero state vector");
    const Vector v = psi / n;
    return DensityMatrix(Matrix(v * v.adjoint()), std::move(local_dims));
  }

  static DensityMatrix maximally_mixed(Index dim, std::vector<Index> local_dims = {}) {
    return DensityMatrix(Matrix(Matrix::Identity(dim, dim) / Real(dim)),
                         std::move(local_dims));
  }

  /// Diagonal state in the computational basis.
  static DensityMatrix diagonal(const RealVector<Real>& probabilities,
                                std::vector<Index> local_dims = {}) {
    return DensityMatrix(
        Matrix(probabilities.template cast<std::complex<Real>>().asDiagonal()),
        std::move(local_dims));
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  const std::vector<Index>& local_dims() const { return local_dims_; }
  std::complex<Real> operator()(Index i, Index j) const { return m_(i, j); }

  Real purity() const { return (m_ * m_).trace().real(); }

  HermitianOperator<Real> as_operator() const { return HermitianOperator<Real>(m_); }

 private:
  Matrix m_;
  std::vector<Index> local_dims_;
};

using DensityMatrixd = DensityMatrix<double>;
using HermitianOperatord = HermitianOperator<double>;
using ComplexMatrixd = ComplexMatrix<double>;
using ComplexVectord = ComplexVector<double>;

template <typename Real>
Real max_norm_distance(const ComplexMatrix<Real>& a, const ComplexMatrix<Real>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max-norm distance of matrices of different shape");
  }
  return max_abs(a - b);
}

template <typename Real>
Real max_norm_distance(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  return max_norm_distance<Real>(a.matrix(), b.matrix());
}

/// Eigendecomposition of the Hermitian part of m.
template <typename Real>
Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> hermitian_eigen(
    const ComplexMatrix<Real>& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>>(hermitian_part(m));
}

/// U f(diag(lambda)) U^dagger for Hermitian m.
template <typename Real, typename F>
ComplexMatrix<Real> hermitian_function(const ComplexMatrix<Real>& m, F&& f) {
  const auto es = hermitian_eigen<Real>(m);
  RealVector<Real> values = es.eigenvalues();
  for (Index i = 0; i < values.size(); ++i) values(i) = f(values(i));
  const auto& u = es.eigenvectors();
  return u * values.template cast<std::complex<Real>>().asDiagonal() * u.adjoint();
}

template <typename Real>
void check_floor(Real floor) {
  if (!(floor > Real(0) && floor <= Real(kMaxLogFloor))) {
    throw std::invalid_argument("log floor must lie in (0, 1e-6], got " +
                                std::to_string(double(floor)));
  }
}

/// Logarithm of a positive semidefinite matrix with eigenvalues clamped from
/// below at `floor`: U diag(ln max(lambda_i, floor)) U^dagger.
template <typename Real>
HermitianOperator<Real> matrix_log_floor(const ComplexMatrix<Real>& a,
                                         Real floor = Real(kDefaultLogFloor)) {
  check_floor(floor);
  if (a.rows() != a.cols()) throw DimensionMismatch("matrix log of non-square matrix");
  const Real scale = std::max(Real(1), max_abs(a));
  if (hermiticity_error(a) > StateTolerance<Real>::hermitian * scale) {
    throw InvalidState("matrix log of non-Hermitian matrix");
  }
  const auto es = hermitian_eigen<Real>(a);
  if (es.eigenvalues().minCoeff() < -StateTolerance<Real>::psd * scale) {
    throw InvalidState("matrix log of a matrix that is not positive semidefinite");
  }
  RealVector<Real> logs = es.eigenvalues();
  for (Index i = 0; i < logs.size(); ++i) logs(i) = std::log(std::max(logs(i), floor));
  const auto& u = es.eigenvectors();
  return HermitianOperator<Real>(
      ComplexMatrix<Real>(u * logs.template cast<std::complex<Real>>().asDiagonal() *
                          u.adjoint()));
}

template <typename Real>
HermitianOperator<Real> matrix_log_floor(const DensityMatrix<Real>& a,
                                         Real floor = Real(kDefaultLogFloor)) {
  return matrix_log_floor<Real>(a.matrix(), floor);
}

/// -sum_i p_i ln p_i with 0 ln 0 = 0; negative round-off is dropped.
template <typename Real>
Real shannon_entropy(const RealVector<Real>& p) {
  Real s = 0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > Real(0)) s -= p(i) * std::log(p(i));
  }
  return s;
}

/// von Neumann entropy in nats.
template <typename Real>
Real von_neumann_entropy(const DensityMatrix<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(rho.matrix(),
                                                        Eigen::EigenvaluesOnly);
  const Real s = shannon_entropy<Real>(es.eigenvalues());
  return std::clamp(s, Real(0), std::log(Real(rho.dim())));
}

/// Tr[A B] for Hermitian A, B (real up to round-off).
template <typename Real>
Real trace_product(const ComplexMatrix<Real>& a, const ComplexMatrix<Real>& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

/// Weight of rho on the eigenspace of sigma with eigenvalues <= cutoff.
template <typename Real>
Real null_space_overlap(const ComplexMatrix<Real>& rho, const ComplexMatrix<Real>& sigma,
                        Real cutoff) {
  const auto es = hermitian_eigen<Real>(sigma);
  Real overlap = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) <= cutoff) {
      const auto v = es.eigenvectors().col(i);
      overlap += (v.adjoint() * rho * v)(0, 0).real();
    }
  }
  return overlap;
}

/// Quantum relative entropy S(rho||sigma) = -S(rho) - Tr[rho log sigma] in
/// nats, with log sigma eigenvalue-floored. Returns +inf when rho has weight
/// above StateTolerance::support on the null space of sigma.
template <typename Real>
Real relative_entropy(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& sigma,
                      Real floor = Real(kDefaultLogFloor)) {
  check_floor(floor);
  if (rho.dim() != sigma.dim()) {
    throw DimensionMismatch("relative entropy of states with dimensions " +
                            std::to_string(rho.dim()) + " and " +
                            std::to_string(sigma.dim()));
  }
  if (null_space_overlap<Real>(rho.matrix(), sigma.matrix(), floor) >
      StateTolerance<Real>::support) {
    return std::numeric_limits<Real>::infinity();
  }
  const auto log_sigma = matrix_log_floor<Real>(sigma.matrix(), floor);
  return -von_neumann_entropy(rho) - trace_product<Real>(rho.matrix(), log_sigma.matrix());
}

/// Zeroes every off-diagonal entry in the computational basis.
template <typename Real>
DensityMatrix<Real> dephase(const DensityMatrix<Real>& rho) {
  return DensityMatrix<Real>(ComplexMatrix<Real>(rho.matrix().diagonal().asDiagonal()),
                             rho.local_dims());
}

template <typename Real>
ComplexMatrix<Real> kron(const ComplexMatrix<Real>& a, const ComplexMatrix<Real>& b) {
  ComplexMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
DensityMatrix<Real> tensor(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  std::vector<Index> dims = a.local_dims();
  dims.insert(dims.end(), b.local_dims().begin(), b.local_dims().end());
  return DensityMatrix<Real>(kron<Real>(a.matrix(), b.matrix()), std::move(dims));
}

/// Reduced state on subsystem `keep` (index into local_dims).
template <typename Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, std::size_t keep) {
  const auto& dims = rho.local_dims();
  if (dims.size() < 2) {
    throw std::invalid_argument("partial trace needs at least two subsystems");
  }
  if (keep >= dims.size()) {
    throw std::out_of_range("subsystem index " + std::to_string(keep) +
                            " out of range for " + std::to_string(dims.size()) +
                            " subsystems");
  }
  Index inner = 1;  // product of dims after `keep`
  for (std::size_t k = keep + 1; k < dims.size(); ++k) inner *= dims[k];
  const Index kept = dims[keep];
  const Index n = rho.dim();
  auto digit = [&](Index i) { return (i / inner) % kept; };
  auto rest = [&](Index i) { return (i / (inner * kept)) * inner + i % inner; };

  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(kept, kept);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (rest(i) == rest(j)) out(digit(i), digit(j)) += rho(i, j);
    }
  }
  return DensityMatrix<Real>(out, {kept});
}

}  // namespace rsl
