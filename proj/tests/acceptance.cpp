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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "crbc/betalaw.hpp"
#include "crbc/error.hpp"
#include "crbc/fisher.hpp"
#include "crbc/mcharness.hpp"
#include "crbc/planner.hpp"
#include "crbc/sigmodel.hpp"
#include "test_support.hpp"

using namespace crbc;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ExperimentConfig campaign(const ComplexMatrix& g, Eigen::Index m, CompressorFamily family, std::size_t trials,
                          std::vector<std::string> stats, std::uint64_t seed = kSeed) {
  ExperimentConfig c;
  c.jacobian = g;
  c.compressor = CompressorSpec{m, g.rows(), family, 1.0 / static_cast<double>(m), RadialLaw::kChi, seed};
  c.trials = trials;
  for (const auto& s : stats) c.statistics.push_back(StatisticRequest::parse(s));
  c.alpha = 0.01;
  return c;
}

ComplexMatrix doa(Eigen::Index n) { return ula_jacobian(UlaScenario::two_source(n)); }

// Shared by criteria 1 and 2.
const ExperimentSummary& histogram_campaign() {
  static const ExperimentSummary s =
      run(campaign(doa(128), 64, CompressorFamily::kGaussian, 10000, {"crb_ratio(0)", "crb_inflation(0)"}));
  return s;
}

Outcome criterion1() {
  const StatisticSummary& st = histogram_campaign().statistic("crb_ratio(0)");
  const bool law_ok = st.reference_law && *st.reference_law == BetaLaw(63, 64);
  const double bound = 1.628 / std::sqrt(10000.0);
  const bool pass = law_ok && st.samples.size() == 10000 && st.ks->statistic < bound;
  return {pass, fmt("KS D = %.5f < %.5f vs Beta(63, 64), 10^4 trials", st.ks->statistic, bound)};
}

Outcome criterion2() {
  const StatisticSummary& st = histogram_campaign().statistic("crb_inflation(0)");
  const double mean_ref = 126.0 / 62.0;
  const double var_ref = (128.0 - 64.0) * (128.0 - 2.0) / ((64.0 - 2.0 - 1.0) * (64.0 - 2.0) * (64.0 - 2.0));
  const double mean_err = std::abs(st.mean - mean_ref) / mean_ref;
  const double var_err = std::abs(st.variance - var_ref) / var_ref;
  return {mean_err < 0.02 && var_err < 0.10,
          fmt("mean %.5f (rel err %.4f < 0.02), ", st.mean, mean_err) +
              fmt("variance %.5f vs %.5f (rel err %.4f < 0.10)", st.variance, var_ref, var_err)};
}

Outcome criterion3() {
  const ExperimentSummary s = run(campaign(doa(32), 16, CompressorFamily::kGaussian, 100000, {"w_mean"}));
  const StatisticSummary& st = s.statistic("w_mean");
  const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  const double err = (*st.mean_matrix - half).norm();
  return {err < 0.01, fmt("||mean(W) - 0.5 I||_F = %.5f < 0.01 over 10^5 trials", err)};
}

Outcome criterion4() {
  const int n = 32, m = 8;
  const UlaScenario s = UlaScenario::two_source(n);
  UlaScenario shifted = s;
  shifted.sources[0].theta += M_PI / (2.0 * n);
  ExperimentConfig c = campaign(ula_jacobian(s), m, CompressorFamily::kGaussian, 10000, {"kl_ratio"});
  c.kl_delta = ula_mean(s) - ula_mean(shifted);
  const ExperimentSummary sum = run(c);
  const StatisticSummary& st = sum.statistic("kl_ratio");
  const bool law_ok = *st.reference_law == BetaLaw(8, 24);
  const double mean_err = std::abs(st.mean - 0.25) / 0.25;
  return {law_ok && st.ks->pass && mean_err < 0.02,
          fmt("KS D = %.5f < %.5f vs Beta(8, 24); ", st.ks->statistic, st.ks->critical) +
              fmt("mean %.5f (rel err %.4f < 0.02)", st.mean, mean_err)};
}

Outcome criterion5() {
  const int n = 64, m = 24;
  const ComplexMatrix model_a = doa(n);
  const ComplexMatrix model_b = oracle::random_complex(n, 2, 2024);
  std::vector<std::vector<double>> doa_samples;
  bool pass = true;
  std::ostringstream detail;
  detail.precision(4);
  std::uint64_t seed = kSeed + 50;
  for (auto f : {CompressorFamily::kGaussian, CompressorFamily::kStiefel, CompressorFamily::kSphericalRows}) {
    const ExperimentSummary a = run(campaign(model_a, m, f, 10000, {"crb_ratio(0)"}, seed++));
    const ExperimentSummary b = run(campaign(model_b, m, f, 10000, {"crb_ratio(0)"}, seed++));
    const KsResult ks = ks_two_sample(a.statistics[0].samples, b.statistics[0].samples, 0.01);
    pass = pass && ks.pass;
    detail << family_name(f) << " DOA/random D=" << ks.statistic << "; ";
    doa_samples.push_back(a.statistics[0].samples);
  }
  const char* names[] = {"gaussian", "stiefel", "spherical_rows"};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const KsResult ks = ks_two_sample(doa_samples[i], doa_samples[j], 0.01);
      pass = pass && ks.pass;
      detail << names[i] << "/" << names[j] << " D=" << ks.statistic << "; ";
    }
  }
  detail << "critical " << 1.628 * std::sqrt(2.0 / 10000);
  return {pass, detail.str()};
}

Outcome criterion6() {
  const ExperimentSummary s = run(campaign(doa(32), 32, CompressorFamily::kStiefel, 100, {"w_eigenvalues"}));
  const StatisticSummary& st = s.statistic("w_eigenvalues");
  double worst = 0.0;
  for (std::size_t t = 0; t < st.trials.size(); ++t) {
    // W is Hermitian, so ||W - I||_F^2 is the sum of (lambda - 1)^2.
    double f2 = 0.0;
    for (int k = 0; k < 2; ++k) f2 += std::pow(st.samples[2 * t + k] - 1.0, 2);
    worst = std::max(worst, std::sqrt(f2));
  }
  return {st.trials.size() == 100 && worst < 1e-10, fmt("max ||W - I||_F = %.3g < 1e-10 over 100 trials", worst)};
}

Outcome criterion7() {
  const int n = 32, m = 12;
  const UlaScenario three{n, {{0.0, 1.0, 0.0}, {M_PI / n, 1.0, 0.0}, {2.5 * M_PI / n, 0.8, 0.6}}};
  const ComplexMatrix g = ula_jacobian(three);
  double min_ev = INFINITY, max_ev = -INFINITY, min_gap = INFINITY;
  std::size_t total = 0;
  const std::size_t per[] = {33334, 33333, 33333};
  int k = 0;
  for (auto f : {CompressorFamily::kGaussian, CompressorFamily::kStiefel, CompressorFamily::kSphericalRows}) {
    const ExperimentSummary s = run(campaign(g, m, f, per[k], {"w_eigenvalues"}, kSeed + 70 + k));
    min_ev = std::min(min_ev, s.diagnostics.min_w_eigenvalue);
    max_ev = std::max(max_ev, s.diagnostics.max_w_eigenvalue);
    min_gap = std::min(min_gap, s.diagnostics.min_crb_gap);
    total += s.trials - s.excluded_trials;
    ++k;
  }
  const bool pass = total == 100000 && min_ev >= -1e-10 && max_ev <= 1.0 + 1e-10 && min_gap >= -1e-10;
  return {pass, fmt("W spectrum in [%.3g, %.6f]; ", min_ev, max_ev) +
                    fmt("min CRB gap %.3g >= -1e-10 over %.0f trials", min_gap, static_cast<double>(total))};
}

Outcome criterion8() {
  const int n = 128, p = 2;
  const double kappa = 2.0, conf = 0.9;
  const int m = min_measurements(PlanQuery{n, p, kappa, conf});
  const double at = confidence_at(n, m, p, kappa);
  const double below = confidence_at(n, m - 1, p, kappa);
  const ExperimentSummary s = run(campaign(doa(n), m, CompressorFamily::kGaussian, 10000, {"crb_inflation(0)"}));
  const auto& v = s.statistics.front().samples;
  const double frac = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x <= kappa; })) /
                      static_cast<double>(v.size());
  const double floor = conf - 3.0 * std::sqrt(conf * (1.0 - conf) / 10000.0);
  const bool pass = at >= conf && below < conf && frac >= floor;
  return {pass, "m* = " + std::to_string(m) + fmt(", confidence(m*) = %.5f, confidence(m*-1) = %.5f, ", at, below) +
                    fmt("Monte Carlo fraction %.4f >= %.4f", frac, floor)};
}

Outcome criterion9() {
  double worst_roundtrip = 0.0;
  for (double a : {0.5, 1.0, 2.0, 10.0, 50.0, 100.0, 200.0}) {
    for (double b : {0.5, 1.0, 3.0, 20.0, 64.0, 150.0, 200.0}) {
      const BetaLaw law(a, b);
      for (double q = 0.001; q <= 0.999; q += 0.001) {
        worst_roundtrip = std::max(worst_roundtrip, std::abs(law.cdf(law.quantile(q)) - q));
      }
    }
  }
  double worst_p1 = 0.0;
  for (auto [m, n] : {std::pair{1, 2}, {5, 17}, {64, 128}, {120, 200}}) {
    const BetaLaw ref(m, n - m);
    for (double x = 0.01; x < 1.0; x += 0.01) {
      ComplexMatrix w(1, 1);
      w(0, 0) = x;
      worst_p1 = std::max(worst_p1, std::abs(matrix_beta_logpdf(HermitianMatrix(w), MatrixBetaLaw(1, m, n)) -
                                             ref.log_pdf(x)));
    }
  }
  double worst_gamma = 0.0;
  for (int p = 1; p <= 8; ++p) {
    for (int a = p; a <= 256; ++a) {
      double ref = 0.5 * p * (p - 1) * std::log(M_PI);
      for (int i = 1; i <= p; ++i) ref += oracle::log_factorial_gamma(a - i + 1);
      worst_gamma = std::max(worst_gamma, std::abs(ln_cmv_gamma(p, a) - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  double worst_fd = 0.0;
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), amp(0.5, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    UlaScenario s{8 + 8 * (rep % 16), {}};
    for (int k = 0; k < 1 + rep % 4; ++k) s.sources.push_back({ang(gen), amp(gen), ang(gen)});
    const UlaModel model(s);
    const RealVector theta = s.angles();
    const ComplexMatrix g = model.jacobian(theta);
    worst_fd = std::max(worst_fd, (finite_diff_jacobian(model, theta, 1e-6) - g).norm() / g.norm());
  }
  const bool pass = worst_roundtrip < 1e-9 && worst_p1 < 1e-12 && worst_gamma < 1e-12 && worst_fd < 1e-5;
  return {pass, fmt("beta round-trip %.2g < 1e-9; p=1 matrix beta %.2g < 1e-12; ", worst_roundtrip, worst_p1) +
                    fmt("ln_cmv_gamma %.2g < 1e-12; ULA Jacobian vs FD %.2g < 1e-5", worst_gamma, worst_fd)};
}

Outcome criterion10() {
  const fs::path dir = fs::temp_directory_path() / "crbc_acceptance_figures";
  fs::remove_all(dir);
  std::ostringstream out, err;
  const int code = cli::run_cli({"figures", "--n", "128", "--m", "64", "--draws", "100", "--seed",
                                 std::to_string(kSeed), "--out", dir.string()},
                                out, err);
  if (code != 0) return {false, "figures exited with " + std::to_string(code) + ": " + err.str()};
  const auto report = nlohmann::json::parse(out.str());
  const double ratio = report["fig2"]["max_ellipse_ratio"].get<double>();
  bool files = true;
  for (const char* f : {"fig2_ellipses.csv", "fig2.svg"}) files = files && fs::file_size(dir / f) > 0;
  // 101 loci: the uncompressed one plus 100 draws.
  std::ifstream csv(dir / "fig2_ellipses.csv");
  std::string line, last;
  std::getline(csv, line);
  while (std::getline(csv, line)) last = line;
  const bool count_ok = last.rfind("100,", 0) == 0;
  return {files && count_ok && ratio <= 1.0 + 1e-9,
          fmt("max lambda_max(Re(J)^-1 Re(J_hat)) = %.6f <= 1 + 1e-9 over 100 draws; CSV and SVG written", ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"CRB ratio follows Beta(m-p+1, n-m) (n=128, m=64, p=2)", criterion1},
      {"mean and variance of the CRB inflation", criterion2},
      {"mean normalized FIM is (m/n) I (n=32, m=16)", criterion3},
      {"KL ratio follows Beta(m, n-m) (n=32, m=8)", criterion4},
      {"CRB ratio law is universal across models and families", criterion5},
      {"no compression at m = n (stiefel)", criterion6},
      {"support of W and CRB monotonicity (n=32, m=12, p=3)", criterion7},
      {"planner boundary and Monte Carlo confidence", criterion8},
      {"numerical kernels", criterion9},
      {"compressed concentration ellipses enclose the uncompressed one", criterion10},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
