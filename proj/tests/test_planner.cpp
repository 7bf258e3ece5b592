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

#include <algorithm>
#include <cmath>
#include <optional>

#include <doctest.h>

#include "crbc/error.hpp"
#include "crbc/fisher.hpp"
#include "crbc/mcharness.hpp"
#include "crbc/planner.hpp"
#include "crbc/sigmodel.hpp"
#include "test_support.hpp"

using namespace crbc;

namespace {

// P[after/before <= kappa] from a quadrature cdf of Beta(m - p + 1, n - m).
double oracle_confidence(int n, int m, int p, double kappa) {
  return 1.0 - oracle::beta_cdf(m - p + 1, n - m, 1.0 / kappa);
}

// Linear scan for the smallest admissible m.
std::optional<int> oracle_min_m(int n, int p, double kappa, double confidence) {
  for (int m = p + 2; m <= n - p; ++m) {
    if (oracle_confidence(n, m, p, kappa) >= confidence) return m;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("confidence at the extremes of kappa") {
  CHECK(confidence_at(128, 64, 2, 1.0) == 0.0);
  CHECK(confidence_at(128, 64, 2, 0.5) == 0.0);
  CHECK(confidence_at(128, 64, 2, 1e6) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(confidence_at(128, 127, 2, 2.0), Error);
  CHECK_THROWS_AS(confidence_at(128, 2, 2, 2.0), Error);
}

TEST_CASE("confidence matches a quadrature oracle") {
  for (int m : {8, 30, 64, 100, 126}) {
    for (double kappa : {1.1, 1.5, 2.0, 4.0}) {
      CHECK(std::abs(confidence_at(128, m, 2, kappa) - oracle_confidence(128, m, 2, kappa)) < 1e-10);
    }
  }
}

TEST_CASE("confidence is nondecreasing in m and kappa") {
  const int n = 128, p = 2;
  for (double kappa = 1.01; kappa <= 10.0; kappa += 0.37) {
    double prev = -1.0;
    for (int m = p + 2; m <= n - p; ++m) {
      const double c = confidence_at(n, m, p, kappa);
      CHECK(c >= prev);
      prev = c;
    }
  }
  for (int m = p + 2; m <= n - p; m += 5) {
    double prev = -1.0;
    for (double kappa = 1.01; kappa <= 10.0; kappa += 0.1) {
      const double c = confidence_at(n, m, p, kappa);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("confidence agrees with the Monte Carlo fraction at n=128, m=64, kappa=2.5") {
  const int trials = 10000;
  ExperimentConfig c;
  c.jacobian = ula_jacobian(UlaScenario::two_source(128));
  c.compressor = CompressorSpec{64, 128, CompressorFamily::kGaussian, 1.0, RadialLaw::kChi, 2024};
  c.trials = trials;
  c.statistics = {StatisticRequest::parse("crb_inflation(0)")};
  const ExperimentSummary s = run(c);
  const auto& v = s.statistics.front().samples;
  const double frac = static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x <= 2.5; })) / v.size();
  const double expected = confidence_at(128, 64, 2, 2.5);
  CHECK(std::abs(frac - expected) <= 3.0 * std::sqrt(expected * (1.0 - expected) / trials));
}

TEST_CASE("everything passes for a huge kappa") {
  CHECK(min_measurements(PlanQuery{128, 2, 1e6, 0.5}) == 4);
  CHECK(min_measurements(PlanQuery{40, 3, 1e6, 0.5}) == 5);
}

TEST_CASE("min_measurements satisfies the boundary property and matches a linear scan") {
  for (int n : {32, 128, 200}) {
    for (int p : {1, 2, 4}) {
      for (double kappa : {1.25, 2.0, 3.5, 8.0}) {
        // 0.5 is avoided: Beta(a, a) puts exactly half its mass below 1/2.
        for (double conf : {0.55, 0.9, 0.99}) {
          const auto expected = oracle_min_m(n, p, kappa, conf);
          if (!expected) {
            CHECK_THROWS_AS(min_measurements(PlanQuery{n, p, kappa, conf}), InfeasibleError);
            continue;
          }
          const int m = min_measurements(PlanQuery{n, p, kappa, conf});
          CHECK(m == *expected);
          CHECK(confidence_at(n, m, p, kappa) >= conf);
          if (m > p + 2) CHECK(confidence_at(n, m - 1, p, kappa) < conf);
        }
      }
    }
  }
}

TEST_CASE("infeasible queries report the best confidence") {
  try {
    min_measurements(PlanQuery{128, 2, 1.01, 0.99});
    FAIL("expected Infeasible");
  } catch (const InfeasibleError& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
    CHECK(e.best_confidence() == doctest::Approx(confidence_at(128, 126, 2, 1.01)));
    CHECK(e.best_confidence() < 0.99);
  }
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(min_measurements(PlanQuery{128, 2, 1.0, 0.9}), Error);
  CHECK_THROWS_AS(min_measurements(PlanQuery{128, 2, 2.0, 1.0}), Error);
  CHECK_THROWS_AS(min_measurements(PlanQuery{128, 2, 2.0, 0.0}), Error);
  CHECK_THROWS_AS(min_measurements(PlanQuery{5, 2, 2.0, 0.9}), Error);
}

TEST_CASE("planning curves are monotone") {
  std::vector<double> kappas;
  for (double k = 1.25; k <= 10.0; k += 0.25) kappas.push_back(k);
  const auto rows = curve(128, 2, kappas, {0.9, 0.99});
  REQUIRE(rows.size() == 2 * kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    const CurveRow& lo = rows[i];
    const CurveRow& hi = rows[kappas.size() + i];
    CHECK(lo.confidence == 0.9);
    CHECK(hi.confidence == 0.99);
    if (lo.m && hi.m) CHECK(*hi.ratio(128) >= *lo.ratio(128));
    if (i > 0) {
      for (const CurveRow* prev : {&rows[i - 1], &rows[kappas.size() + i - 1]}) {
        const CurveRow& cur = prev == &rows[i - 1] ? lo : hi;
        if (prev->m && cur.m) CHECK(*cur.m <= *prev->m);
        if (prev->m) CHECK(cur.m.has_value());
      }
    }
  }
  const auto tight = curve(128, 2, {1.05, 1.5}, {0.99});
  CHECK_FALSE(tight[0].m.has_value());
  CHECK(tight[0].achieved < 0.99);
  CHECK(tight[1].m.has_value());
}

TEST_CASE("ellipse loci") {
  const auto circle = ellipse_locus(HermitianMatrix::identity(2), 1.0, 64);
  REQUIRE(circle.size() == 64);
  for (const auto& e : circle) CHECK(std::hypot(e[0], e[1]) == doctest::Approx(1.0).epsilon(1e-14));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const auto ell = ellipse_locus(HermitianMatrix(d), 1.0, 4);
  CHECK(ell[0][0] == doctest::Approx(0.5));
  CHECK(std::abs(ell[0][1]) < 1e-15);
  CHECK(std::abs(ell[1][0]) < 1e-15);
  CHECK(ell[1][1] == doctest::Approx(1.0));
}

TEST_CASE("every locus point satisfies the quadratic form") {
  const FimResult f = fim(ula_jacobian(UlaScenario::two_source(128)), 1.0);
  const double r2 = f.j(0, 0).real();
  const RealMatrix re = f.j.real_part();
  for (const auto& p : ellipse_locus(f.j, r2, 361)) {
    const Eigen::Vector2d e(p[0], p[1]);
    CHECK(std::abs(e.dot(re * e) - r2) < 1e-10 * r2);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(ellipse_locus(HermitianMatrix(bad), 1.0, 10), Error);
  CHECK_THROWS_AS(ellipse_locus(HermitianMatrix::identity(3), 1.0, 10), Error);
}
