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

// Random compression matrices whose law is right-unitarily invariant, drawn
// from counter-based streams so that every Monte Carlo trial is
// reproducible on its own.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "crbc/cxla.hpp"

namespace crbc {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. The key is the campaign seed, the upper
/// counter words hold the trial index and the lower ones a block index, so
/// the numbers drawn for one trial never depend on any other trial.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t trial) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller (libm only, no std::*_distribution, so
  /// the sequence is the same across standard libraries).
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t trial_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::optional<double> spare_normal_;
};

RngStream derive_stream(std::uint64_t seed, std::uint64_t trial) noexcept;

enum class CompressorFamily { kGaussian, kStiefel, kSphericalRows };

/// Radial law of each row in the spherical_rows family.
enum class RadialLaw {
  kChi,       ///< norm of a CN(0, v I_n) row: the Gaussian special case
  kConstant,  ///< every row has norm sqrt(n v)
};

std::string_view family_name(CompressorFamily f) noexcept;
CompressorFamily parse_family(std::string_view name);
std::string_view radial_law_name(RadialLaw r) noexcept;
RadialLaw parse_radial_law(std::string_view name);

struct CompressorSpec {
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  CompressorFamily family = CompressorFamily::kGaussian;
  /// Complex variance of each entry (gaussian) or per-entry scale of the
  /// row norm (spherical_rows). Projector statistics do not depend on it.
  double element_variance = 1.0;
  RadialLaw radial = RadialLaw::kChi;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One m x n draw. Gaussian entries have independent N(0, v/2) real and
/// imaginary parts; stiefel draws satisfy Phi Phi^H = I_m and are Haar.
ComplexMatrix sample(const CompressorSpec& spec, RngStream& stream);

/// Draw for trial `trial` of the campaign described by `spec`.
ComplexMatrix sample_trial(const CompressorSpec& spec, std::uint64_t trial);

}  // namespace crbc
