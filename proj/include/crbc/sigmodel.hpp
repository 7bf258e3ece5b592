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

#include <functional>
#include <memory>
#include <vector>

#include "crbc/cxla.hpp"

namespace crbc {

/// Mean-vector model theta -> x(theta) in C^n with Jacobian G in C^{n x p}.
/// Parameters are real.
class SignalModel {
 public:
  virtual ~SignalModel() = default;

  virtual Eigen::Index ambient_dim() const = 0;
  virtual Eigen::Index param_count() const = 0;
  virtual ComplexVector mean(const RealVector& theta) const = 0;
  virtual ComplexMatrix jacobian(const RealVector& theta) const = 0;
};

struct UlaSource {
  double theta = 0.0;      ///< electrical angle [rad]
  double amplitude = 1.0;  ///< known, > 0
  double phase = 0.0;      ///< known [rad]
};

/// Uniform line array with known amplitudes and phases; the unknowns are
/// the electrical angles. Element k (k = 0..n-1) of source i is
/// A_i exp(j phi_i) exp(j k theta_i).
struct UlaScenario {
  Eigen::Index n = 0;
  std::vector<UlaSource> sources;

  void validate() const;
  RealVector angles() const;
  Eigen::Index param_count() const { return static_cast<Eigen::Index>(sources.size()); }

  /// Two unit-amplitude, zero-phase sources at 0 and pi/n (half the
  /// Rayleigh limit), the standard two-source resolution scenario.
  static UlaScenario two_source(Eigen::Index n);
};

ComplexVector ula_mean(const UlaScenario& s);
ComplexMatrix ula_jacobian(const UlaScenario& s);

/// SignalModel adapter over a ULA scenario; theta overrides the angles.
class UlaModel final : public SignalModel {
 public:
  explicit UlaModel(UlaScenario scenario);

  Eigen::Index ambient_dim() const override { return scenario_.n; }
  Eigen::Index param_count() const override { return scenario_.param_count(); }
  ComplexVector mean(const RealVector& theta) const override;
  ComplexMatrix jacobian(const RealVector& theta) const override;

  const UlaScenario& scenario() const noexcept { return scenario_; }

 private:
  UlaScenario with_angles(const RealVector& theta) const;

  UlaScenario scenario_;
};

/// Model built from user callables; used for custom models and tests.
class FunctionModel final : public SignalModel {
 public:
  using MeanFn = std::function<ComplexVector(const RealVector&)>;
  using JacobianFn = std::function<ComplexMatrix(const RealVector&)>;

  FunctionModel(Eigen::Index n, Eigen::Index p, MeanFn mean, JacobianFn jacobian = {});

  Eigen::Index ambient_dim() const override { return n_; }
  Eigen::Index param_count() const override { return p_; }
  ComplexVector mean(const RealVector& theta) const override;
  /// Falls back to central differences when no analytic Jacobian is given.
  ComplexMatrix jacobian(const RealVector& theta) const override;

 private:
  Eigen::Index n_;
  Eigen::Index p_;
  MeanFn mean_;
  JacobianFn jacobian_;
};

inline constexpr double kDefaultFiniteDiffStep = 1e-6;

/// Central differences (x(theta + h e_i) - x(theta - h e_i)) / 2h per column.
ComplexMatrix finite_diff_jacobian(const SignalModel& model, const RealVector& theta,
                                   double h = kDefaultFiniteDiffStep);

}  // namespace crbc
