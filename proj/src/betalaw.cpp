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

#include "crbc/betalaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "crbc/error.hpp"

namespace crbc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxContinuedFractionTerms = 200;
constexpr double kSpectrumSlack = 1e-10;

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// exponent * log(x) with the convention 0 * log(0) = 0.
double xlogy(double exponent, double x) {
  if (exponent == 0.0) return 0.0;
  if (x <= 0.0) return exponent > 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
  return exponent * std::log(x);
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double dm = m;
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::kNoConvergence, "incomplete beta: continued fraction did not converge");
}

struct BetaTails {
  double lower;
  double upper;
};

BetaTails incomplete_beta_tails(double a, double b, double x) {
  if (x <= 0.0) return {0.0, 1.0};
  if (x >= 1.0) return {1.0, 0.0};
  const double log_front = a * std::log(x) + b * std::log1p(-x) - lbeta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, 1.0 - x) / b;
  return {1.0 - upper, upper};
}

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kDomainError, std::string(what) + ": argument outside [0, 1]");
  }
}

}  // namespace

double ln_cmv_gamma(int p, double a) {
  if (p < 1) throw Error(ErrorCode::kDomainError, "multivariate gamma: p must be >= 1");
  if (!(a > p - 1)) {
    throw Error(ErrorCode::kDomainError, "multivariate gamma: need a > p - 1");
  }
  double sum = 0.5 * p * (p - 1) * std::log(std::numbers::pi);
  for (int i = 1; i <= p; ++i) sum += std::lgamma(a - i + 1);
  return sum;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::kDomainError, "incomplete beta: a, b > 0");
  require_unit_interval(x, "incomplete beta");
  return incomplete_beta_tails(a, b, x).lower;
}

BetaLaw::BetaLaw(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kDomainError, "beta law: shapes must be positive and finite");
  }
  log_norm_ = -lbeta(a, b);
}

double BetaLaw::variance() const noexcept {
  const double s = a_ + b_;
  return a_ * b_ / (s * s * (s + 1.0));
}

double BetaLaw::log_pdf(double x) const {
  require_unit_interval(x, "beta pdf");
  return log_norm_ + xlogy(a_ - 1.0, x) + xlogy(b_ - 1.0, 1.0 - x);
}

double BetaLaw::pdf(double x) const { return std::exp(log_pdf(x)); }

double BetaLaw::cdf(double x) const {
  require_unit_interval(x, "beta cdf");
  return incomplete_beta_tails(a_, b_, x).lower;
}

double BetaLaw::sf(double x) const {
  require_unit_interval(x, "beta sf");
  return incomplete_beta_tails(a_, b_, x).upper;
}

double BetaLaw::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::kDomainError, "beta quantile: q outside (0, 1)");
  // Safeguarded Newton: the bracket [lo, hi] always contains the root and a
  // bisection step replaces any Newton step that would leave it.
  double lo = 0.0;
  double hi = 1.0;
  double x = std::clamp(mean(), 1e-12, 1.0 - 1e-12);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = cdf(x) - q;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(x, 1e-300)) break;
    const double density = pdf(x);
    double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

MatrixBetaLaw::MatrixBetaLaw(int p_, int m_, int n_) : p(p_), m(m_), n(n_) {
  if (p < 1 || m < p || n - m < p) {
    throw Error(ErrorCode::kDomainError, "matrix beta law: need m >= p and n - m >= p");
  }
}

double MatrixBetaLaw::log_norm() const {
  return ln_cmv_gamma(p, n) - ln_cmv_gamma(p, m) - ln_cmv_gamma(p, n - m);
}

namespace {

RealVector spectrum(const HermitianMatrix& a) {
  const ComplexMatrix& mat = a.matrix();
  if (mat.isDiagonal(0.0)) return mat.diagonal().real();
  return a.eigenvalues();
}

// sum_i exponent * log(l_i) over eigenvalues clamped into [0, 1].
double log_det_power(const RealVector& ev, double exponent) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sum += xlogy(exponent, std::max(ev(i), 0.0));
  return sum;
}

}  // namespace

double matrix_beta_logpdf(const HermitianMatrix& w, const MatrixBetaLaw& law) {
  if (w.dim() != law.p) throw Error(ErrorCode::kBadShape, "matrix beta: W must be p x p");
  const RealVector ev = spectrum(w);
  if (ev.minCoeff() < -kSpectrumSlack || ev.maxCoeff() > 1.0 + kSpectrumSlack) {
    throw Error(ErrorCode::kDomainError, "matrix beta: spectrum of W outside [0, 1]");
  }
  const RealVector complement = spectrum(HermitianMatrix::identity(law.p) - w);
  return law.log_norm() + log_det_power(ev, law.m - law.p) +
         log_det_power(complement, law.n - law.m - law.p);
}

double eig_joint_logpdf(const RealVector& lambda, const MatrixBetaLaw& law) {
  if (lambda.size() != law.p) {
    throw Error(ErrorCode::kBadShape, "eigenvalue density: expected p eigenvalues");
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    require_unit_interval(lambda(i), "eigenvalue density");
  }
  const int p = law.p;
  double value = p * (p - 1) * std::log(std::numbers::pi) + ln_cmv_gamma(p, law.n) -
                 ln_cmv_gamma(p, p) - ln_cmv_gamma(p, law.m) - ln_cmv_gamma(p, law.n - law.m);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    for (Eigen::Index j = i + 1; j < lambda.size(); ++j) {
      value += xlogy(2.0, std::abs(lambda(i) - lambda(j)));
    }
    value += xlogy(law.m - p, lambda(i)) + xlogy(law.n - law.m - p, 1.0 - lambda(i));
  }
  return value;
}

double fim_after_logpdf(const HermitianMatrix& j_hat, const HermitianMatrix& j,
                        const MatrixBetaLaw& law) {
  if (j.dim() != law.p || j_hat.dim() != law.p) {
    throw Error(ErrorCode::kBadShape, "compressed FIM density: matrices must be p x p");
  }
  if (!j.is_pd()) throw Error(ErrorCode::kDomainError, "compressed FIM density: J must be PD");
  const RealVector ev_j = spectrum(j);
  const RealVector ev_hat = spectrum(j_hat);
  const RealVector ev_gap = spectrum(j - j_hat);
  const double slack = kSpectrumSlack * ev_j.maxCoeff();
  if (ev_hat.minCoeff() < -slack || ev_gap.minCoeff() < -slack) {
    throw Error(ErrorCode::kDomainError, "compressed FIM density: need 0 <= J_hat <= J");
  }
  return law.log_norm() + log_det_power(ev_j, law.p - law.n) +
         log_det_power(ev_hat, law.m - law.p) + log_det_power(ev_gap, law.n - law.m - law.p);
}

BetaLaw crb_ratio_law(int n, int m, int p) {
  if (p < 1 || m <= p || n <= m) {
    throw Error(ErrorCode::kDomainError, "CRB ratio law: need p >= 1, m > p and n > m");
  }
  return BetaLaw(m - p + 1, n - m);
}

BetaLaw kl_ratio_law(int n, int m) {
  if (m < 1 || n <= m) throw Error(ErrorCode::kDomainError, "KL ratio law: need n > m >= 1");
  return BetaLaw(m, n - m);
}

CompressionMoments moments(int n, int m, int p, const HermitianMatrix& j, Eigen::Index i) {
  if (p < 1 || m <= p || m > n) {
    throw Error(ErrorCode::kDomainError, "moments: need p < m <= n");
  }
  if (j.dim() != p) throw Error(ErrorCode::kBadShape, "moments: J must be p x p");
  if (i < 0 || i >= p) throw Error(ErrorCode::kBadShape, "moments: parameter index out of range");
  Eigen::LLT<ComplexMatrix> llt(j.matrix());
  if (llt.info() != Eigen::Success || !j.is_pd()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "moments: J is not positive definite");
  }
  const ComplexVector e = ComplexVector::Unit(p, i);
  const double crb = llt.solve(e)(i).real();

  const double dn = n, dm = m, dp = p;
  CompressionMoments out;
  out.mean_fim_scale = dm / dn;
  out.mean_crb = (dn - dp) / (dm - dp) * crb;
  if (m == n) {
    out.var_crb = 0.0;
  } else if (m > p + 1) {
    out.var_crb = (dn - dm) * (dn - dp) / ((dm - dp - 1.0) * (dm - dp) * (dm - dp)) * crb * crb;
  }
  return out;
}

}  // namespace crbc
