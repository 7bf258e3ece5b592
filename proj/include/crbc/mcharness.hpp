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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crbc/betalaw.hpp"
#include "crbc/cxla.hpp"
#include "crbc/randcomp.hpp"

namespace crbc {

// ---------------------------------------------------------------------------
// Goodness of fit and histograms
// ---------------------------------------------------------------------------

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  double alpha = 0.01;
  bool pass = false;
};

inline constexpr std::size_t kMinKsSamples = 100;

/// Asymptotic Kolmogorov coefficient c(alpha): 1.628 at 0.01, 1.358 at
/// 0.05, sqrt(-ln(alpha/2)/2) otherwise.
double ks_coefficient(double alpha);

/// D = sup |F_N - F|, critical value c(alpha)/sqrt(N). Throws TooFewSamples.
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                       double alpha = 0.01);

/// Two-sample statistic, critical c(alpha) sqrt((N1 + N2)/(N1 N2)).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double alpha = 0.01);

struct Histogram {
  std::vector<double> edges;         ///< bins + 1 ascending edges
  std::vector<std::size_t> counts;
  double density_scale = 0.0;        ///< 1 / (N * bin width)

  double density(std::size_t bin) const { return counts[bin] * density_scale; }
};

/// Uniform bins over `range` (default [min, max]). Samples outside an
/// explicit range are not counted; the top edge is inclusive.
Histogram histogram(std::span<const double> samples, int bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

// ---------------------------------------------------------------------------
// Monte Carlo campaigns
// ---------------------------------------------------------------------------

enum class StatisticKind {
  kCrbRatio,       ///< (J^{-1})_ii / (J_hat^{-1})_ii, before over after
  kCrbInflation,   ///< (J_hat^{-1})_ii / (J^{-1})_ii, after over before
  kKlRatio,        ///< D_hat / D for the configured mean difference
  kWEigenvalues,   ///< p eigenvalues of W per trial, ascending
  kWMean,          ///< W per trial; scalar series trace(W)/p
  kFimMean,        ///< J_hat per trial; scalar series trace(J_hat)/trace(J)
};

struct StatisticRequest {
  StatisticKind kind = StatisticKind::kCrbRatio;
  Eigen::Index param = 0;  ///< parameter index for the CRB statistics

  std::string name() const;
  /// Accepts "crb_ratio", "crb_ratio(1)", "kl_ratio", "w_eigenvalues", ...
  static StatisticRequest parse(const std::string& text);
};

struct ExperimentConfig {
  ComplexMatrix jacobian;                ///< G, n x p
  std::optional<ComplexVector> kl_delta; ///< x(theta) - x(theta'), for kl_ratio
  double sigma2 = 1.0;
  CompressorSpec compressor;             ///< compressor.n must equal G.rows()
  std::size_t trials = 10000;
  std::vector<StatisticRequest> statistics;
  int histogram_bins = 50;
  double alpha = 0.01;
  unsigned threads = 0;                  ///< 0 = hardware concurrency
  /// Run even when n - p < m, where the closed-form laws are not claimed.
  bool allow_law_violation = false;

  void validate() const;
};

struct StatisticSummary {
  StatisticRequest request;
  std::string name;
  int values_per_trial = 1;
  /// Trial index of every recorded trial (excluded trials are absent).
  std::vector<std::uint64_t> trials;
  /// trials.size() * values_per_trial values, trial-major.
  std::vector<double> samples;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> reference_mean;
  std::optional<double> reference_variance;
  std::optional<KsResult> ks;
  std::optional<BetaLaw> reference_law;
  Histogram histogram;
  /// Entrywise mean of W or J_hat for the matrix statistics.
  std::optional<ComplexMatrix> mean_matrix;
  std::optional<ComplexMatrix> reference_matrix;
  std::optional<double> frobenius_error;
};

struct SupportDiagnostics {
  double min_w_eigenvalue = 1.0;
  double max_w_eigenvalue = 0.0;
  /// min over trials and parameters of (J_hat^{-1})_ii - (J^{-1})_ii.
  double min_crb_gap = 0.0;
  /// Largest eigenvalue of Re(J)^{-1} Re(J_hat) over trials.
  double max_ellipse_ratio = 0.0;
};

struct ExperimentSummary {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index p = 0;
  std::size_t trials = 0;
  std::size_t excluded_trials = 0;
  std::vector<StatisticSummary> statistics;
  SupportDiagnostics diagnostics;
  double elapsed_seconds = 0.0;

  const StatisticSummary& statistic(const std::string& name) const;
};

/// Fraction of excluded (singular) trials above which a campaign fails.
inline constexpr double kMaxExcludedFraction = 1e-3;

/// Runs the campaign. Trial t always draws Phi from derive_stream(seed, t)
/// and results are reduced in trial order, so the output does not depend
/// on the thread count.
ExperimentSummary run(const ExperimentConfig& config);

/// Neumaier-compensated mean and unbiased variance (two-pass).
std::pair<double, double> mean_variance(std::span<const double> values);

}  // namespace crbc
