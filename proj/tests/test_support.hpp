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

// Reference implementations used as test oracles. They are deliberately
// naive (cofactor expansion, Gauss-Jordan, composite quadrature) and share no
// code with the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

inline Mat from_eigen(const Eigen::MatrixXcd& m) {
  Mat out(m.rows(), std::vector<cd>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

// Laplace expansion along the first row.
inline cd cofactor_det(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  cd det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<cd> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    det += sign * a[0][c] * cofactor_det(minor);
  }
  return det;
}

// Gauss-Jordan inverse with partial pivoting.
inline Mat gauss_jordan_inverse(Mat a) {
  const std::size_t n = a.size();
  Mat inv(n, std::vector<cd>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const cd d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const cd f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// G^H G / sigma2 with plain loops.
inline Mat gram(const Eigen::MatrixXcd& g, double sigma2) {
  Mat j(g.cols(), std::vector<cd>(g.cols(), 0.0));
  for (Eigen::Index a = 0; a < g.cols(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b) {
      cd s = 0.0;
      for (Eigen::Index k = 0; k < g.rows(); ++k) s += std::conj(g(k, a)) * g(k, b);
      j[a][b] = s / sigma2;
    }
  return j;
}

// ln Gamma(k) for integer k >= 1 as a sum of logs.
inline double log_factorial_gamma(int k) {
  double s = 0.0;
  for (int j = 2; j < k; ++j) s += std::log(static_cast<double>(j));
  return s;
}

// ln Gamma(k + 1/2) for integer k >= 0: Gamma(1/2) = sqrt(pi), then the
// recurrence Gamma(x + 1) = x Gamma(x).
inline double log_half_integer_gamma(int k) {
  double s = 0.5 * std::log(M_PI);
  for (int j = 0; j < k; ++j) s += std::log(j + 0.5);
  return s;
}

// Composite Gauss-Legendre (5 nodes) on `panels` equal panels.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double c = a + (k + 0.5) * h;
    for (int q = 0; q < 5; ++q) s += w[q] * f(c + 0.5 * h * x[q]);
  }
  return 0.5 * h * s;
}

// Beta(a, b) pdf from std::lgamma, independent of the library's law.
inline double beta_pdf(double a, double b, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1) * std::log(x) +
                  (b - 1) * std::log1p(-x));
}

// Beta cdf by quadrature of the pdf, panels concentrated where the mass is.
inline double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return integrate([&](double t) { return beta_pdf(a, b, t); }, 0.0, x, 4000);
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {nd(gen), nd(gen)};
  return m;
}

inline Eigen::MatrixXcd random_hpd(Eigen::Index p, std::uint32_t seed) {
  const Eigen::MatrixXcd a = random_complex(p, p + 3, seed);
  return a * a.adjoint();
}

}  // namespace oracle
