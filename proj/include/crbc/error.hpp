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

#include <stdexcept>
#include <string>
#include <string_view>

namespace crbc {

enum class ErrorCode {
  kBadShape,
  kRankDeficient,
  kNotPositiveDefinite,
  kSingularMatrix,
  kSingularFim,
  kDomainError,
  kNoConvergence,
  kBadSpec,
  kTooFewSamples,
  kInfeasible,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the planner when no legal measurement count reaches the
/// requested confidence. `best_confidence` is the value achieved at the
/// largest admissible m.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_confidence)
      : Error(ErrorCode::kInfeasible, what), best_confidence_(best_confidence) {}

  double best_confidence() const noexcept { return best_confidence_; }

 private:
  double best_confidence_;
};

}  // namespace crbc
