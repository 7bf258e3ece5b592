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

// Closed-form laws of the Fisher information after random compression.
//
// With W = J^{-1/2} J_hat J^{-H/2} and Phi drawn from a right-unitarily
// invariant ensemble, W follows the complex Type-I matrix beta law
// CB_p(m, n - m):
//
//   f(W) = c5 |W|^{m-p} |I - W|^{n-m-p},   0 <= W <= I,
//   c5   = G_p(n) / (G_p(m) G_p(n - m)),
//
// where G_p is the complex multivariate gamma function. The per-parameter
// ratio (J^{-1})_ii / (J_hat^{-1})_ii is Beta(m - p + 1, n - m) and the
// compressed-to-uncompressed KL ratio is Beta(m, n - m). Everything is
// evaluated in the log domain; G_p(128) overflows a double.

#pragma once

#include <optional>

#include "crbc/cxla.hpp"

namespace crbc {

/// log G_p(a) = p(p-1)/2 log(pi) + sum_{i=1..p} log Gamma(a - i + 1).
/// Throws DomainError unless a > p - 1.
double ln_cmv_gamma(int p, double a);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Univariate Type-I beta law on (0, 1).
class BetaLaw {
 public:
  BetaLaw(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  double log_pdf(double x) const;
  double pdf(double x) const;
  double cdf(double x) const;
  /// Upper tail 1 - cdf(x), evaluated without cancellation.
  double sf(double x) const;
  double quantile(double q) const;

  double mean() const noexcept { return a_ / (a_ + b_); }
  double variance() const noexcept;

  bool operator==(const BetaLaw&) const = default;

 private:
  double a_;
  double b_;
  double log_norm_;  // -log B(a, b)
};

/// Parameters of CB_p(m, n - m); requires m >= p and n - m >= p.
struct MatrixBetaLaw {
  int p = 1;
  int m = 1;
  int n = 2;

  MatrixBetaLaw(int p, int m, int n);

  /// log c5.
  double log_norm() const;
};

/// log f(W). Returns -infinity on the support boundary when the exponent
/// there is positive; throws DomainError if the spectrum of W leaves
/// [-1e-10, 1 + 1e-10].
double matrix_beta_logpdf(const HermitianMatrix& w, const MatrixBetaLaw& law);

/// Log joint density of the eigenvalues of W:
///   pi^{p(p-1)} G_p(n) / (G_p(p) G_p(m) G_p(n-m))
///     * prod_{i<j} (l_i - l_j)^2 * prod_i l_i^{m-p} (1 - l_i)^{n-m-p}.
/// This is the density of the ordered eigenvalues; as a symmetric function
/// on [0,1]^p it integrates to p!.
double eig_joint_logpdf(const RealVector& lambda, const MatrixBetaLaw& law);

/// Log density of J_hat given J on 0 <= J_hat <= J:
///   log c5 + (p - n) log|J| + (m - p) log|J_hat| + (n - m - p) log|J - J_hat|.
/// The law of J_hat^{-1} follows from this one by change of variables.
double fim_after_logpdf(const HermitianMatrix& j_hat, const HermitianMatrix& j,
                        const MatrixBetaLaw& law);

/// Law of (J^{-1})_ii / (J_hat^{-1})_ii (before over after): Beta(m-p+1, n-m).
BetaLaw crb_ratio_law(int n, int m, int p);

/// Law of the compressed over uncompressed KL divergence: Beta(m, n-m).
BetaLaw kl_ratio_law(int n, int m);

struct CompressionMoments {
  double mean_fim_scale;  ///< E[J_hat] = mean_fim_scale * J
  double mean_crb;        ///< E[(J_hat^{-1})_ii]
  /// var[(J_hat^{-1})_ii]; empty when m <= p + 1 (the moment does not exist)
  /// unless m == n.
  std::optional<double> var_crb;
};

/// Throws DomainError when m <= p (the mean does not exist) or m > n.
CompressionMoments moments(int n, int m, int p, const HermitianMatrix& j, Eigen::Index i);

}  // namespace crbc
