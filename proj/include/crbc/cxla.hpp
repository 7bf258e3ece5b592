// Copyright 2026 The crb-compress Authors.
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

// Dense complex linear algebra shared by the rest of the library:
// orthonormal bases, orthogonal projectors, Hermitian inverse square roots
// and log-determinants.

#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace crbc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
  /// Numerical rank: pivots below rank_tol * largest pivot count as zero.
  double rank_tol = 1e-10;
  /// Eigenvalues above -psd_tol * max(1, |lambda_max|) pass a PSD check.
  double psd_tol = 1e-10;
  /// Eigenvalues above pd_tol * lambda_max pass a PD check.
  double pd_tol = 1e-13;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Throws BadShape if `m` is empty or holds a non-finite entry.
void require_finite(const ComplexMatrix& m, std::string_view what);

/// A complex Hermitian matrix. Construction stores (A + A^H)/2 so the
/// conjugate symmetry holds exactly in memory.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  static HermitianMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return data_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  /// Ascending eigenvalues.
  RealVector eigenvalues() const;

  bool is_psd(const Tolerances& tol = kDefaultTolerances) const;
  bool is_pd(const Tolerances& tol = kDefaultTolerances) const;

  /// Real part, i.e. the quadratic form restricted to real vectors.
  RealMatrix real_part() const { return data_.real(); }

  HermitianMatrix operator*(double s) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;

 private:
  ComplexMatrix data_;
};

/// Orthonormal basis of the column span of a matrix, computed once with a
/// column-pivoted Householder QR and reused for projections.
class ColumnSpace {
 public:
  explicit ColumnSpace(const ComplexMatrix& m,
                       double rank_tol = kDefaultTolerances.rank_tol);

  Eigen::Index ambient_dim() const noexcept { return qr_.rows(); }
  Eigen::Index rank() const noexcept { return rank_; }
  bool full_column_rank() const noexcept { return rank_ == qr_.cols(); }

  /// n x rank matrix Q with Q^H Q = I.
  ComplexMatrix basis() const;
  /// Q^H X: coordinates of the projection of X in the basis.
  ComplexMatrix coordinates(const ComplexMatrix& x) const;
  /// Q Q^H X.
  ComplexMatrix project(const ComplexMatrix& x) const;

 private:
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr_;
  Eigen::Index rank_ = 0;
};

/// Q with Q^H Q = I spanning the columns of `m`. Throws RankDeficient
/// unless `m` has full column rank.
ComplexMatrix orthonormal_columns(const ComplexMatrix& m,
                                  double rank_tol = kDefaultTolerances.rank_tol);

/// Orthogonal projector onto the column span of `m`; rank-deficient input is
/// allowed and projects onto the actual span.
HermitianMatrix projector(const ComplexMatrix& m,
                          double rank_tol = kDefaultTolerances.rank_tol);

/// S with S A S^H = I, via the eigendecomposition of A. Throws
/// NotPositiveDefinite.
ComplexMatrix hermitian_inv_sqrt(const HermitianMatrix& a,
                                 const Tolerances& tol = kDefaultTolerances);

/// log|A| from the eigenvalues. Throws SingularMatrix when A is singular
/// and NotPositiveDefinite when it has a clearly negative eigenvalue.
double logdet_hpd(const HermitianMatrix& a,
                  const Tolerances& tol = kDefaultTolerances);

/// As logdet_hpd but returns -infinity for a singular (PSD) argument.
double logdet_or_neg_inf(const HermitianMatrix& a,
                         const Tolerances& tol = kDefaultTolerances);

}  // namespace crbc
