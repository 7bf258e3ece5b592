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

// Fisher information and Cramer-Rao bounds for the complex Gaussian mean
// model y ~ CN(x(theta), sigma^2 I), before and after a linear compression
// y_hat = Phi y (noise enters ahead of the compressor).

#pragma once

#include "crbc/cxla.hpp"

namespace crbc {

/// J = G^H G / sigma^2 together with the sensitivity matrix it came from.
/// For a compressed FIM, `g` holds P_{Phi^H} G.
struct FimResult {
  HermitianMatrix j;
  ComplexMatrix g;
  double sigma2 = 1.0;

  Eigen::Index n() const noexcept { return g.rows(); }
  Eigen::Index p() const noexcept { return g.cols(); }
};

/// W = J^{-1/2} J_hat J^{-H/2}; spectrum in [0, 1].
struct NormalizedFim {
  HermitianMatrix w;
};

/// Residual energy g_i^H (I - P) g_i below this fraction of |g_i|^2 means
/// column i is (numerically) in the span of the others.
inline constexpr double kSingularFimRatio = 1e-12;

FimResult fim(const ComplexMatrix& g, double sigma2);

/// (J^{-1})_ii through sigma^2 (g_i^H (I - P_{G_i}) g_i)^{-1}.
double crb(const FimResult& fim, Eigen::Index i);

/// sigma^2 / (|g_i|^2 sin^2 psi_i), psi_i the principal angle between g_i
/// and the span of the other columns.
double crb_angle_form(const ComplexMatrix& g, double sigma2, Eigen::Index i);

/// J_hat = G^H P_{Phi^H} G / sigma^2. Throws RankDeficient unless Phi has
/// full row rank.
FimResult compressed_fim(const ComplexMatrix& g, const ComplexMatrix& phi, double sigma2);

/// (J_hat^{-1})_ii via the projection form on G_hat = P_{Phi^H} G.
double compressed_crb(const ComplexMatrix& g, const ComplexMatrix& phi, double sigma2,
                      Eigen::Index i);

NormalizedFim normalized_fim(const FimResult& before, const FimResult& after);

/// (x1 - x2)^H C^{-1} (x1 - x2).
double kl_divergence(const ComplexVector& x1, const ComplexVector& x2, const HermitianMatrix& c);

/// (x1 - x2)^H Phi^H (Phi C Phi^H)^{-1} Phi (x1 - x2).
double compressed_kl(const ComplexVector& x1, const ComplexVector& x2, const HermitianMatrix& c,
                     const ComplexMatrix& phi);

/// Per-draw quantities needed by the Monte Carlo harness, computed from one
/// QR factorization of Phi^H. `uncompressed` must come from fim(g, sigma2).
struct CompressedDraw {
  FimResult fim;
  /// (J_hat^{-1})_ii for every i.
  RealVector crb;
};

CompressedDraw compress(const FimResult& uncompressed, const ColumnSpace& row_space);

}  // namespace crbc
