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

// Compression planning from the beta law of the CRB ratio, and
// concentration-ellipse loci for two-parameter problems.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "crbc/cxla.hpp"

namespace crbc {

/// P[(J_hat^{-1})_ii <= kappa (J^{-1})_ii] for an m x n compressor and p
/// parameters. Requires p < m <= n - p and kappa > 0.
double confidence_at(int n, int m, int p, double kappa);

struct PlanQuery {
  int n = 0;
  int p = 0;
  double kappa = 2.0;       ///< tolerable CRB inflation, > 1
  double confidence = 0.9;  ///< in (0, 1)

  void validate() const;
};

/// Smallest m in [p + 2, n - p] whose confidence reaches q.confidence.
/// Throws InfeasibleError (carrying the best achievable confidence) when
/// even m = n - p falls short.
int min_measurements(const PlanQuery& q);

struct CurveRow {
  double kappa = 0.0;
  double confidence = 0.0;
  std::optional<int> m;  ///< empty when infeasible
  double achieved = 0.0; ///< confidence at m, or the best achievable one

  std::optional<double> ratio(int n) const {
    if (!m) return std::nullopt;
    return static_cast<double>(*m) / n;
  }
};

std::vector<CurveRow> curve(int n, int p, const std::vector<double>& kappas,
                            const std::vector<double>& confidences);

/// Real error vectors e with e^T Re(J) e = r^2, at `points` equally spaced
/// polar angles in [0, 2 pi]. J must be 2 x 2 and positive definite.
std::vector<std::array<double, 2>> ellipse_locus(const HermitianMatrix& j, double r2, int points);

}  // namespace crbc
