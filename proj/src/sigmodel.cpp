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

#include "crbc/sigmodel.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "crbc/error.hpp"

namespace crbc {

void UlaScenario::validate() const {
  if (n < 2) throw Error(ErrorCode::kBadSpec, "ULA: need at least 2 sensors");
  if (sources.empty()) throw Error(ErrorCode::kBadSpec, "ULA: need at least one source");
  for (const auto& src : sources) {
    if (!(src.amplitude > 0.0) || !std::isfinite(src.amplitude)) {
      throw Error(ErrorCode::kBadSpec, "ULA: source amplitude must be positive");
    }
    if (!std::isfinite(src.theta) || !std::isfinite(src.phase)) {
      throw Error(ErrorCode::kBadSpec, "ULA: non-finite source angle or phase");
    }
  }
}

RealVector UlaScenario::angles() const {
  RealVector theta(param_count());
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = sources[static_cast<size_t>(i)].theta;
  return theta;
}

UlaScenario UlaScenario::two_source(Eigen::Index n) {
  UlaScenario s;
  s.n = n;
  s.sources = {UlaSource{0.0, 1.0, 0.0},
               UlaSource{std::numbers::pi / static_cast<double>(n), 1.0, 0.0}};
  return s;
}

namespace {

// A exp(j phi) exp(j k theta), k = 0..n-1.
ComplexVector steering(Eigen::Index n, const UlaSource& src) {
  ComplexVector v(n);
  const Complex gain = std::polar(src.amplitude, src.phase);
  for (Eigen::Index k = 0; k < n; ++k) {
    v(k) = gain * std::polar(1.0, static_cast<double>(k) * src.theta);
  }
  return v;
}

}  // namespace

ComplexVector ula_mean(const UlaScenario& s) {
  s.validate();
  ComplexVector x = ComplexVector::Zero(s.n);
  for (const auto& src : s.sources) x += steering(s.n, src);
  return x;
}

ComplexMatrix ula_jacobian(const UlaScenario& s) {
  s.validate();
  ComplexMatrix g(s.n, s.param_count());
  for (Eigen::Index i = 0; i < g.cols(); ++i) {
    const ComplexVector v = steering(s.n, s.sources[static_cast<size_t>(i)]);
    for (Eigen::Index k = 0; k < s.n; ++k) {
      g(k, i) = Complex(0.0, static_cast<double>(k)) * v(k);
    }
  }
  return g;
}

UlaModel::UlaModel(UlaScenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
}

UlaScenario UlaModel::with_angles(const RealVector& theta) const {
  if (theta.size() != param_count()) {
    throw Error(ErrorCode::kBadShape, "ULA model: expected " + std::to_string(param_count()) +
                                          " parameters");
  }
  UlaScenario s = scenario_;
  for (Eigen::Index i = 0; i < theta.size(); ++i) s.sources[static_cast<size_t>(i)].theta = theta(i);
  return s;
}

ComplexVector UlaModel::mean(const RealVector& theta) const { return ula_mean(with_angles(theta)); }

ComplexMatrix UlaModel::jacobian(const RealVector& theta) const {
  return ula_jacobian(with_angles(theta));
}

FunctionModel::FunctionModel(Eigen::Index n, Eigen::Index p, MeanFn mean, JacobianFn jacobian)
    : n_(n), p_(p), mean_(std::move(mean)), jacobian_(std::move(jacobian)) {
  if (p_ < 1 || n_ <= p_) throw Error(ErrorCode::kBadSpec, "model: need p >= 1 and n > p");
  if (!mean_) throw Error(ErrorCode::kBadSpec, "model: missing mean function");
}

ComplexVector FunctionModel::mean(const RealVector& theta) const { return mean_(theta); }

ComplexMatrix FunctionModel::jacobian(const RealVector& theta) const {
  if (jacobian_) return jacobian_(theta);
  return finite_diff_jacobian(*this, theta);
}

ComplexMatrix finite_diff_jacobian(const SignalModel& model, const RealVector& theta, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kDomainError, "finite differences: step must be > 0");
  if (theta.size() != model.param_count()) {
    throw Error(ErrorCode::kBadShape, "finite differences: parameter count mismatch");
  }
  ComplexMatrix g(model.ambient_dim(), model.param_count());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    RealVector up = theta;
    RealVector down = theta;
    up(i) += h;
    down(i) -= h;
    g.col(i) = (model.mean(up) - model.mean(down)) / (2.0 * h);
  }
  return g;
}

}  // namespace crbc
