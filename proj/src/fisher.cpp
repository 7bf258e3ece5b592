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

#include "crbc/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crbc/error.hpp"

namespace crbc {
namespace {

void check_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::kDomainError, "noise variance must be positive and finite");
  }
}

void check_index(const ComplexMatrix& g, Eigen::Index i) {
  if (i < 0 || i >= g.cols()) {
    throw Error(ErrorCode::kBadShape, "parameter index " + std::to_string(i) + " out of range");
  }
}

ComplexMatrix drop_column(const ComplexMatrix& g, Eigen::Index i) {
  ComplexMatrix out(g.rows(), g.cols() - 1);
  out.leftCols(i) = g.leftCols(i);
  out.rightCols(g.cols() - 1 - i) = g.rightCols(g.cols() - 1 - i);
  return out;
}

struct ColumnSplit {
  double norm2;      // |g_i|^2
  double residual2;  // g_i^H (I - P_{G_i}) g_i
};

ColumnSplit split_column(const ComplexMatrix& g, Eigen::Index i) {
  const ComplexVector gi = g.col(i);
  ColumnSplit out{gi.squaredNorm(), gi.squaredNorm()};
  if (g.cols() > 1) {
    const ColumnSpace others(drop_column(g, i));
    // |g_i|^2 - |Q^H g_i|^2 loses accuracy near collinearity; the explicit
    // residual does not.
    out.residual2 = (gi - others.project(gi)).squaredNorm();
  }
  if (!(out.norm2 > 0.0) || out.residual2 < kSingularFimRatio * out.norm2) {
    throw Error(ErrorCode::kSingularFim,
                "parameter " + std::to_string(i) + " is not identifiable (singular FIM)");
  }
  return out;
}

double projection_crb(const ComplexMatrix& g, double sigma2, Eigen::Index i) {
  return sigma2 / split_column(g, i).residual2;
}

ColumnSpace row_space_of(const ComplexMatrix& phi, Eigen::Index n, Eigen::Index p) {
  require_finite(phi, "compression matrix");
  if (phi.cols() != n) {
    throw Error(ErrorCode::kBadShape, "compression matrix must have n = " + std::to_string(n) +
                                          " columns");
  }
  if (phi.rows() <= p || phi.rows() > n) {
    throw Error(ErrorCode::kBadShape, "compression matrix needs p < m <= n");
  }
  ColumnSpace space(phi.adjoint());
  if (!space.full_column_rank()) {
    throw Error(ErrorCode::kRankDeficient, "compression matrix does not have full row rank");
  }
  return space;
}

}  // namespace

FimResult fim(const ComplexMatrix& g, double sigma2) {
  check_sigma2(sigma2);
  require_finite(g, "Jacobian");
  if (g.rows() <= g.cols()) {
    throw Error(ErrorCode::kBadShape, "Jacobian must be n x p with n > p");
  }
  return FimResult{HermitianMatrix(g.adjoint() * g / sigma2), g, sigma2};
}

double crb(const FimResult& f, Eigen::Index i) {
  check_index(f.g, i);
  return projection_crb(f.g, f.sigma2, i);
}

double crb_angle_form(const ComplexMatrix& g, double sigma2, Eigen::Index i) {
  check_sigma2(sigma2);
  require_finite(g, "Jacobian");
  check_index(g, i);
  const ColumnSplit split = split_column(g, i);
  const double sin2 = split.residual2 / split.norm2;
  return sigma2 / (split.norm2 * sin2);
}

FimResult compressed_fim(const ComplexMatrix& g, const ComplexMatrix& phi, double sigma2) {
  const FimResult before = fim(g, sigma2);
  return compress(before, row_space_of(phi, g.rows(), g.cols())).fim;
}

double compressed_crb(const ComplexMatrix& g, const ComplexMatrix& phi, double sigma2,
                      Eigen::Index i) {
  check_index(g, i);
  const FimResult after = compressed_fim(g, phi, sigma2);
  return projection_crb(after.g, sigma2, i);
}

CompressedDraw compress(const FimResult& uncompressed, const ColumnSpace& row_space) {
  const ComplexMatrix& g = uncompressed.g;
  if (row_space.ambient_dim() != g.rows()) {
    throw Error(ErrorCode::kBadShape, "compression row space has the wrong ambient dimension");
  }
  // Norms and inner products are preserved in the row-space coordinates, so
  // every per-parameter quantity is computed on the small m x p block.
  const ComplexMatrix coords = row_space.coordinates(g);
  const double sigma2 = uncompressed.sigma2;
  CompressedDraw out;
  out.fim.sigma2 = sigma2;
  out.fim.j = HermitianMatrix(coords.adjoint() * coords / sigma2);
  out.fim.g = row_space.project(g);
  out.crb.resize(g.cols());
  for (Eigen::Index i = 0; i < g.cols(); ++i) out.crb(i) = projection_crb(coords, sigma2, i);
  return out;
}

NormalizedFim normalized_fim(const FimResult& before, const FimResult& after) {
  if (before.j.dim() != after.j.dim()) {
    throw Error(ErrorCode::kBadShape, "normalized FIM: dimension mismatch");
  }
  const ComplexMatrix s = hermitian_inv_sqrt(before.j);
  return NormalizedFim{HermitianMatrix(s * after.j.matrix() * s.adjoint())};
}

namespace {

double whitened_energy(const ComplexVector& v, const HermitianMatrix& c) {
  Eigen::LLT<ComplexMatrix> llt(c.matrix());
  if (llt.info() != Eigen::Success || !c.is_pd()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "KL divergence: covariance is not positive definite");
  }
  const ComplexVector w = llt.matrixL().solve(v);
  return std::max(0.0, w.squaredNorm());
}

}  // namespace

double kl_divergence(const ComplexVector& x1, const ComplexVector& x2, const HermitianMatrix& c) {
  if (x1.size() != x2.size() || c.dim() != x1.size()) {
    throw Error(ErrorCode::kBadShape, "KL divergence: shape mismatch");
  }
  return whitened_energy(x1 - x2, c);
}

double compressed_kl(const ComplexVector& x1, const ComplexVector& x2, const HermitianMatrix& c,
                     const ComplexMatrix& phi) {
  if (x1.size() != x2.size() || c.dim() != x1.size() || phi.cols() != x1.size()) {
    throw Error(ErrorCode::kBadShape, "compressed KL divergence: shape mismatch");
  }
  require_finite(phi, "compression matrix");
  if (phi.rows() > phi.cols() || !ColumnSpace(phi.adjoint()).full_column_rank()) {
    throw Error(ErrorCode::kRankDeficient, "compression matrix does not have full row rank");
  }
  if (!c.is_pd()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "KL divergence: covariance is not positive definite");
  }
  const HermitianMatrix compressed_cov(phi * c.matrix() * phi.adjoint());
  return whitened_energy(phi * (x1 - x2), compressed_cov);
}

}  // namespace crbc
