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

#include "crbc/mcharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "crbc/error.hpp"
#include "crbc/fisher.hpp"

namespace crbc {

// ---------------------------------------------------------------------------
// Goodness of fit
// ---------------------------------------------------------------------------

double ks_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kDomainError, "KS: alpha in (0, 1)");
  if (alpha == 0.01) return 1.628;
  if (alpha == 0.05) return 1.358;
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                       double alpha) {
  if (samples.size() < kMinKsSamples) {
    throw Error(ErrorCode::kTooFewSamples, "KS: need at least 100 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult out;
  out.statistic = d;
  out.alpha = alpha;
  out.critical = ks_coefficient(alpha) / std::sqrt(n);
  out.pass = d < out.critical;
  return out;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < kMinKsSamples || b.size() < kMinKsSamples) {
    throw Error(ErrorCode::kTooFewSamples, "KS: need at least 100 samples in each set");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    // Step past every copy of the smaller value so ties move both ECDFs.
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult out;
  out.statistic = d;
  out.alpha = alpha;
  out.critical = ks_coefficient(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
  out.pass = d < out.critical;
  return out;
}

Histogram histogram(std::span<const double> samples, int bins,
                    std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw Error(ErrorCode::kDomainError, "histogram: bins must be >= 1");
  double lo = 0.0, hi = 1.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(hi > lo)) throw Error(ErrorCode::kDomainError, "histogram: empty range");
  } else if (!samples.empty()) {
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    lo = *mn;
    hi = *mx;
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  Histogram h;
  const double width = (hi - lo) / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) h.edges[static_cast<std::size_t>(k)] = lo + k * width;
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : samples) {
    if (!(v >= lo && v <= hi)) continue;
    auto k = static_cast<std::size_t>((v - lo) / width);
    k = std::min(k, static_cast<std::size_t>(bins) - 1);
    ++h.counts[k];
  }
  h.density_scale = samples.empty() ? 0.0 : 1.0 / (static_cast<double>(samples.size()) * width);
  return h;
}

std::pair<double, double> mean_variance(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  auto neumaier = [&](auto term) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
      const double t = term(v);
      const double s = sum + t;
      comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
      sum = s;
    }
    return sum + comp;
  };
  const double n = static_cast<double>(values.size());
  const double mean = neumaier([](double v) { return v; }) / n;
  if (values.size() < 2) return {mean, 0.0};
  const double ss = neumaier([mean](double v) { return (v - mean) * (v - mean); });
  return {mean, ss / (n - 1.0)};
}

// ---------------------------------------------------------------------------
// Statistic requests
// ---------------------------------------------------------------------------

namespace {

struct KindName {
  StatisticKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {StatisticKind::kCrbRatio, "crb_ratio"},      {StatisticKind::kCrbInflation, "crb_inflation"},
    {StatisticKind::kKlRatio, "kl_ratio"},        {StatisticKind::kWEigenvalues, "w_eigenvalues"},
    {StatisticKind::kWMean, "w_mean"},            {StatisticKind::kFimMean, "fim_mean"},
};

bool per_parameter(StatisticKind k) {
  return k == StatisticKind::kCrbRatio || k == StatisticKind::kCrbInflation;
}

}  // namespace

std::string StatisticRequest::name() const {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) {
      return per_parameter(kind) ? std::string(kn.name) + "(" + std::to_string(param) + ")"
                                 : std::string(kn.name);
    }
  }
  return "unknown";
}

StatisticRequest StatisticRequest::parse(const std::string& text) {
  std::string base = text;
  Eigen::Index param = 0;
  if (const auto open = text.find('('); open != std::string::npos) {
    const auto close = text.find(')', open);
    if (close == std::string::npos || close != text.size() - 1) {
      throw Error(ErrorCode::kConfigError, "malformed statistic '" + text + "'");
    }
    base = text.substr(0, open);
    try {
      std::size_t used = 0;
      const std::string digits = text.substr(open + 1, close - open - 1);
      param = std::stol(digits, &used);
      if (used != digits.size() || param < 0) throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "malformed statistic index in '" + text + "'");
    }
  }
  for (const auto& kn : kKindNames) {
    if (base == kn.name) {
      if (!per_parameter(kn.kind) && base != text) {
        throw Error(ErrorCode::kConfigError, "statistic '" + base + "' takes no index");
      }
      return StatisticRequest{kn.kind, param};
    }
  }
  throw Error(ErrorCode::kConfigError, "unknown statistic '" + text + "'");
}

void ExperimentConfig::validate() const {
  require_finite(jacobian, "experiment Jacobian");
  const Eigen::Index n = jacobian.rows();
  const Eigen::Index p = jacobian.cols();
  if (n <= p) throw Error(ErrorCode::kConfigError, "experiment: Jacobian must have n > p");
  compressor.validate();
  if (compressor.n != n) {
    throw Error(ErrorCode::kConfigError, "experiment: compressor n does not match the model");
  }
  if (compressor.m <= p) throw Error(ErrorCode::kConfigError, "experiment: need m > p");
  if (n - p < compressor.m && compressor.m != n && !allow_law_violation) {
    throw Error(ErrorCode::kConfigError,
                "experiment: n - p >= m is required for the closed-form laws "
                "(set allow_law_violation to override)");
  }
  if (trials < 1) throw Error(ErrorCode::kConfigError, "experiment: trials must be >= 1");
  if (histogram_bins < 1) throw Error(ErrorCode::kConfigError, "experiment: histogram_bins >= 1");
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::kConfigError, "experiment: sigma2 must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kConfigError, "experiment: alpha in (0,1)");
  if (statistics.empty()) throw Error(ErrorCode::kConfigError, "experiment: no statistics requested");
  for (const auto& s : statistics) {
    if (per_parameter(s.kind) && s.param >= p) {
      throw Error(ErrorCode::kConfigError, "experiment: statistic " + s.name() +
                                               " refers to a missing parameter");
    }
    if (s.kind == StatisticKind::kKlRatio) {
      if (!kl_delta || kl_delta->size() != n) {
        throw Error(ErrorCode::kConfigError, "experiment: kl_ratio needs a mean difference of length n");
      }
      if (!(kl_delta->squaredNorm() > 0.0)) {
        throw Error(ErrorCode::kConfigError, "experiment: kl_ratio needs theta' != theta");
      }
    }
  }
}

const StatisticSummary& ExperimentSummary::statistic(const std::string& name) const {
  for (const auto& s : statistics) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kConfigError, "no statistic named '" + name + "' in summary");
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

namespace {

struct TrialOutcome {
  bool excluded = false;
  RealVector crb;            // (J_hat^{-1})_ii
  ComplexMatrix j_hat;
  ComplexMatrix w;
  RealVector w_eigenvalues;  // ascending
  double kl_ratio = 0.0;
  double ellipse_ratio = 0.0;
};

struct Context {
  const ExperimentConfig& config;
  FimResult before;
  RealVector crb_before;
  ComplexMatrix inv_sqrt_j;
  bool need_kl = false;
  double kl_norm2 = 0.0;
};

TrialOutcome run_trial(const Context& ctx, std::uint64_t trial) {
  TrialOutcome out;
  const ComplexMatrix phi = sample_trial(ctx.config.compressor, trial);
  const ColumnSpace row_space(phi.adjoint());
  if (!row_space.full_column_rank()) {
    out.excluded = true;
    return out;
  }
  try {
    CompressedDraw draw = compress(ctx.before, row_space);
    out.crb = std::move(draw.crb);
    out.j_hat = draw.fim.j.matrix();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularFim) throw;
    out.excluded = true;
    return out;
  }
  const HermitianMatrix w(ctx.inv_sqrt_j * out.j_hat * ctx.inv_sqrt_j.adjoint());
  out.w = w.matrix();
  out.w_eigenvalues = w.eigenvalues();
  if (ctx.need_kl) {
    out.kl_ratio = row_space.coordinates(*ctx.config.kl_delta).squaredNorm() / ctx.kl_norm2;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> ges(out.j_hat.real(), ctx.before.j.real_part(),
                                                            Eigen::EigenvaluesOnly);
  out.ellipse_ratio = ges.eigenvalues().maxCoeff();
  return out;
}

void fill_reference(StatisticSummary& s, const ExperimentConfig& cfg, const Context& ctx) {
  const int n = static_cast<int>(cfg.jacobian.rows());
  const int m = static_cast<int>(cfg.compressor.m);
  const int p = static_cast<int>(cfg.jacobian.cols());
  const double dn = n, dm = m, dp = p;
  switch (s.request.kind) {
    case StatisticKind::kCrbRatio:
      if (m < n) {
        s.reference_law = crb_ratio_law(n, m, p);
        s.reference_mean = s.reference_law->mean();
        s.reference_variance = s.reference_law->variance();
      }
      break;
    case StatisticKind::kCrbInflation:
      s.reference_mean = (dn - dp) / (dm - dp);
      if (m > p + 1) {
        s.reference_variance = (dn - dm) * (dn - dp) / ((dm - dp - 1.0) * (dm - dp) * (dm - dp));
      }
      if (m < n) s.reference_law = crb_ratio_law(n, m, p);
      break;
    case StatisticKind::kKlRatio:
      if (m < n) {
        s.reference_law = kl_ratio_law(n, m);
        s.reference_mean = s.reference_law->mean();
        s.reference_variance = s.reference_law->variance();
      }
      break;
    case StatisticKind::kWEigenvalues:
      s.reference_mean = dm / dn;
      if (p == 1 && m < n) s.reference_law = BetaLaw(m, n - m);
      break;
    case StatisticKind::kWMean:
      s.reference_mean = dm / dn;
      s.reference_matrix = ComplexMatrix::Identity(p, p) * (dm / dn);
      break;
    case StatisticKind::kFimMean:
      s.reference_mean = dm / dn;
      s.reference_matrix = ctx.before.j.matrix() * (dm / dn);
      break;
  }
}

}  // namespace

ExperimentSummary run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Context ctx{config, fim(config.jacobian, config.sigma2), {}, {}, false, 0.0};
  const Eigen::Index p = config.jacobian.cols();
  ctx.crb_before.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) ctx.crb_before(i) = crb(ctx.before, i);
  ctx.inv_sqrt_j = hermitian_inv_sqrt(ctx.before.j);
  for (const auto& s : config.statistics) {
    if (s.kind == StatisticKind::kKlRatio) ctx.need_kl = true;
  }
  if (ctx.need_kl) ctx.kl_norm2 = config.kl_delta->squaredNorm();

  std::vector<TrialOutcome> outcomes(config.trials);
  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < config.trials; ++t) outcomes[t] = run_trial(ctx, t);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < config.trials; t += workers) outcomes[t] = run_trial(ctx, t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentSummary summary;
  summary.n = config.jacobian.rows();
  summary.m = config.compressor.m;
  summary.p = p;
  summary.trials = config.trials;
  for (const auto& o : outcomes) summary.excluded_trials += o.excluded ? 1 : 0;
  if (static_cast<double>(summary.excluded_trials) >
      kMaxExcludedFraction * static_cast<double>(config.trials)) {
    throw Error(ErrorCode::kSingularFim,
                "experiment: " + std::to_string(summary.excluded_trials) +
                    " trials had a singular compressed FIM (more than 0.1%)");
  }

  SupportDiagnostics& diag = summary.diagnostics;
  diag.min_crb_gap = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.excluded) continue;
    diag.min_w_eigenvalue = std::min(diag.min_w_eigenvalue, o.w_eigenvalues.minCoeff());
    diag.max_w_eigenvalue = std::max(diag.max_w_eigenvalue, o.w_eigenvalues.maxCoeff());
    diag.min_crb_gap = std::min(diag.min_crb_gap, (o.crb - ctx.crb_before).minCoeff());
    diag.max_ellipse_ratio = std::max(diag.max_ellipse_ratio, o.ellipse_ratio);
  }

  const double trace_j = ctx.before.j.matrix().trace().real();
  for (const auto& req : config.statistics) {
    StatisticSummary s;
    s.request = req;
    s.name = req.name();
    s.values_per_trial = req.kind == StatisticKind::kWEigenvalues ? static_cast<int>(p) : 1;
    const bool matrix_stat = req.kind == StatisticKind::kWMean || req.kind == StatisticKind::kFimMean;
    ComplexMatrix acc = ComplexMatrix::Zero(p, p);
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      const auto& o = outcomes[t];
      if (o.excluded) continue;
      s.trials.push_back(t);
      const Eigen::Index i = req.param;
      switch (req.kind) {
        case StatisticKind::kCrbRatio: s.samples.push_back(ctx.crb_before(i) / o.crb(i)); break;
        case StatisticKind::kCrbInflation: s.samples.push_back(o.crb(i) / ctx.crb_before(i)); break;
        case StatisticKind::kKlRatio: s.samples.push_back(o.kl_ratio); break;
        case StatisticKind::kWEigenvalues:
          for (Eigen::Index k = 0; k < p; ++k) s.samples.push_back(o.w_eigenvalues(k));
          break;
        case StatisticKind::kWMean:
          s.samples.push_back(o.w.trace().real() / static_cast<double>(p));
          break;
        case StatisticKind::kFimMean:
          s.samples.push_back(o.j_hat.trace().real() / trace_j);
          break;
      }
      if (req.kind == StatisticKind::kWMean) acc += o.w;
      if (req.kind == StatisticKind::kFimMean) acc += o.j_hat;
    }
    std::tie(s.mean, s.variance) = mean_variance(s.samples);
    fill_reference(s, config, ctx);
    if (matrix_stat && !s.trials.empty()) {
      s.mean_matrix = acc / static_cast<double>(s.trials.size());
      s.frobenius_error = (*s.mean_matrix - *s.reference_matrix).norm();
    }
    if (s.reference_law && s.samples.size() >= kMinKsSamples) {
      const BetaLaw law = *s.reference_law;
      if (req.kind == StatisticKind::kCrbInflation) {
        // P[1/X <= t] = P[X >= 1/t].
        s.ks = ks_one_sample(s.samples,
                             [law](double t) { return t <= 1.0 ? 0.0 : law.sf(1.0 / t); },
                             config.alpha);
      } else {
        s.ks = ks_one_sample(
            s.samples, [law](double x) { return law.cdf(std::clamp(x, 0.0, 1.0)); }, config.alpha);
      }
    }
    s.histogram = histogram(s.samples, config.histogram_bins);
    summary.statistics.push_back(std::move(s));
  }

  summary.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace crbc
