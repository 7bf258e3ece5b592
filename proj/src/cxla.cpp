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

#include "crbc/cxla.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "crbc/error.hpp"

namespace crbc {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kSingularFim: return "SingularFim";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(ErrorCode::kBadShape, std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::kBadShape, std::string(what) + ": non-finite entry");
  }
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kBadShape, "Hermitian matrix must be square");
  }
  require_finite(a, "Hermitian matrix");
  data_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

RealVector HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(data_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool HermitianMatrix::is_psd(const Tolerances& tol) const {
  const RealVector ev = eigenvalues();
  const double scale = std::max(1.0, std::abs(ev(ev.size() - 1)));
  return ev(0) > -tol.psd_tol * scale;
}

bool HermitianMatrix::is_pd(const Tolerances& tol) const {
  const RealVector ev = eigenvalues();
  const double top = ev(ev.size() - 1);
  return top > 0.0 && ev(0) > tol.pd_tol * top;
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  HermitianMatrix out;
  out.data_ = data_ * s;
  return out;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::kBadShape, "Hermitian difference: dimension mismatch");
  }
  HermitianMatrix out;
  out.data_ = data_ - other.data_;
  return out;
}

ColumnSpace::ColumnSpace(const ComplexMatrix& m, double rank_tol) {
  require_finite(m, "column space");
  qr_.setThreshold(rank_tol);
  qr_.compute(m);
  rank_ = qr_.rank();
}

ComplexMatrix ColumnSpace::basis() const {
  ComplexMatrix q = ComplexMatrix::Identity(qr_.rows(), rank_);
  q.applyOnTheLeft(qr_.householderQ());
  return q;
}

ComplexMatrix ColumnSpace::coordinates(const ComplexMatrix& x) const {
  if (x.rows() != qr_.rows()) {
    throw Error(ErrorCode::kBadShape, "column space: row count mismatch");
  }
  ComplexMatrix y = x;
  y.applyOnTheLeft(qr_.householderQ().adjoint());
  return y.topRows(rank_);
}

ComplexMatrix ColumnSpace::project(const ComplexMatrix& x) const {
  ComplexMatrix y = ComplexMatrix::Zero(qr_.rows(), x.cols());
  y.topRows(rank_) = coordinates(x);
  y.applyOnTheLeft(qr_.householderQ());
  return y;
}

ComplexMatrix orthonormal_columns(const ComplexMatrix& m, double rank_tol) {
  ColumnSpace space(m, rank_tol);
  if (!space.full_column_rank()) {
    throw Error(ErrorCode::kRankDeficient,
                "orthonormal_columns: rank " + std::to_string(space.rank()) +
                    " < " + std::to_string(m.cols()) + " columns");
  }
  return space.basis();
}

HermitianMatrix projector(const ComplexMatrix& m, double rank_tol) {
  const ComplexMatrix q = ColumnSpace(m, rank_tol).basis();
  return HermitianMatrix(q * q.adjoint());
}

ComplexMatrix hermitian_inv_sqrt(const HermitianMatrix& a, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  const RealVector& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (!(top > 0.0) || !(ev(0) > tol.pd_tol * top)) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "hermitian_inv_sqrt: matrix is not positive definite");
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.adjoint();
}

namespace {

double logdet_impl(const HermitianMatrix& a, const Tolerances& tol, bool throw_singular) {
  // Diagonal input is summed directly so that the result is exact there.
  const ComplexMatrix& m = a.matrix();
  RealVector ev;
  if (m.isDiagonal(0.0)) {
    ev = m.diagonal().real();
  } else {
    ev = a.eigenvalues();
  }
  const double top = ev.maxCoeff();
  const double bottom = ev.minCoeff();
  const double scale = std::max(1.0, std::abs(top));
  if (bottom < -tol.psd_tol * scale) {
    throw Error(ErrorCode::kNotPositiveDefinite, "logdet: matrix has a negative eigenvalue");
  }
  if (!(bottom > 0.0)) {
    if (throw_singular) {
      throw Error(ErrorCode::kSingularMatrix, "logdet: matrix is singular");
    }
    return -std::numeric_limits<double>::infinity();
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sum += std::log(ev(i));
  return sum;
}

}  // namespace

double logdet_hpd(const HermitianMatrix& a, const Tolerances& tol) {
  return logdet_impl(a, tol, true);
}

double logdet_or_neg_inf(const HermitianMatrix& a, const Tolerances& tol) {
  return logdet_impl(a, tol, false);
}

}  // namespace crbc
