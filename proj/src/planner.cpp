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

#include "crbc/planner.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "crbc/betalaw.hpp"
#include "crbc/error.hpp"

namespace crbc {

double confidence_at(int n, int m, int p, double kappa) {
  if (p < 1 || m <= p || m > n - p) {
    throw Error(ErrorCode::kDomainError, "confidence_at: need p < m <= n - p");
  }
  if (!(kappa > 0.0)) throw Error(ErrorCode::kDomainError, "confidence_at: kappa must be > 0");
  // after/before <= kappa  <=>  X = before/after >= 1/kappa.
  const double threshold = 1.0 / kappa;
  if (threshold >= 1.0) return 0.0;
  return crb_ratio_law(n, m, p).sf(threshold);
}

void PlanQuery::validate() const {
  if (p < 1 || n <= p + 1) throw Error(ErrorCode::kDomainError, "plan: need p >= 1 and n > p + 1");
  if (!(kappa > 1.0)) throw Error(ErrorCode::kDomainError, "plan: kappa must exceed 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kDomainError, "plan: confidence must lie in (0, 1)");
  }
  if (p + 2 > n - p) {
    throw Error(ErrorCode::kDomainError, "plan: no admissible m (need p + 2 <= n - p)");
  }
}

int min_measurements(const PlanQuery& q) {
  q.validate();
  int lo = q.p + 2;
  int hi = q.n - q.p;
  const double best = confidence_at(q.n, hi, q.p, q.kappa);
  if (best < q.confidence) {
    throw InfeasibleError("plan: confidence " + std::to_string(q.confidence) +
                              " unreachable; best achievable is " + std::to_string(best),
                          best);
  }
  // confidence_at is nondecreasing in m; keep hi feasible.
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (confidence_at(q.n, mid, q.p, q.kappa) >= q.confidence) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

std::vector<CurveRow> curve(int n, int p, const std::vector<double>& kappas,
                            const std::vector<double>& confidences) {
  std::vector<CurveRow> rows;
  rows.reserve(kappas.size() * confidences.size());
  for (double conf : confidences) {
    for (double kappa : kappas) {
      CurveRow row{kappa, conf, std::nullopt, 0.0};
      try {
        row.m = min_measurements(PlanQuery{n, p, kappa, conf});
        row.achieved = confidence_at(n, *row.m, p, kappa);
      } catch (const InfeasibleError& e) {
        row.achieved = e.best_confidence();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<std::array<double, 2>> ellipse_locus(const HermitianMatrix& j, double r2, int points) {
  if (j.dim() != 2) throw Error(ErrorCode::kBadShape, "ellipse: J must be 2 x 2");
  if (!(r2 > 0.0)) throw Error(ErrorCode::kDomainError, "ellipse: r^2 must be positive");
  if (points < 1) throw Error(ErrorCode::kDomainError, "ellipse: need at least one point");
  // For real e the skew-Hermitian part of J cancels: e^H J e = e^T Re(J) e.
  const RealMatrix re = j.real_part();
  Eigen::LLT<RealMatrix> llt(re);
  if (llt.info() != Eigen::Success || !j.is_pd()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "ellipse: J is not positive definite");
  }
  // Point at polar angle phi: e = r d / sqrt(d^T Re(J) d), d = (cos phi, sin phi).
  const double r = std::sqrt(r2);
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / points;
    const Eigen::Vector2d d(std::cos(angle), std::sin(angle));
    const Eigen::Vector2d e = (r / std::sqrt(d.dot(re * d))) * d;
    out.push_back({e(0), e(1)});
  }
  return out;
}

}  // namespace crbc
