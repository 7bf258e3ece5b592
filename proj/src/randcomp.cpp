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

#include "crbc/randcomp.hpp"

#include <cmath>
#include <numbers>

#include "crbc/error.hpp"

namespace crbc {
namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      trial_(trial) {}

void RngStream::refill() noexcept {
  buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)},
                       key_);
  ++block_;
  used_ = 0;
}

std::uint32_t RngStream::next_u32() noexcept {
  if (used_ == 4) refill();
  return buffer_[static_cast<size_t>(used_++)];
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double RngStream::uniform() noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

RngStream derive_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
  return RngStream(seed, trial);
}

std::string_view family_name(CompressorFamily f) noexcept {
  switch (f) {
    case CompressorFamily::kGaussian: return "gaussian";
    case CompressorFamily::kStiefel: return "stiefel";
    case CompressorFamily::kSphericalRows: return "spherical_rows";
  }
  return "unknown";
}

CompressorFamily parse_family(std::string_view name) {
  if (name == "gaussian") return CompressorFamily::kGaussian;
  if (name == "stiefel") return CompressorFamily::kStiefel;
  if (name == "spherical_rows") return CompressorFamily::kSphericalRows;
  throw Error(ErrorCode::kBadSpec, "unknown compressor family '" + std::string(name) + "'");
}

std::string_view radial_law_name(RadialLaw r) noexcept {
  switch (r) {
    case RadialLaw::kChi: return "chi";
    case RadialLaw::kConstant: return "constant";
  }
  return "unknown";
}

RadialLaw parse_radial_law(std::string_view name) {
  if (name == "chi") return RadialLaw::kChi;
  if (name == "constant") return RadialLaw::kConstant;
  throw Error(ErrorCode::kBadSpec, "unknown radial law '" + std::string(name) + "'");
}

void CompressorSpec::validate() const {
  if (m < 1 || n < 1) throw Error(ErrorCode::kBadSpec, "compressor: m and n must be >= 1");
  if (m > n) throw Error(ErrorCode::kBadSpec, "compressor: m must not exceed n");
  if (!(element_variance > 0.0) || !std::isfinite(element_variance)) {
    throw Error(ErrorCode::kBadSpec, "compressor: element variance must be positive");
  }
}

namespace {

ComplexMatrix gaussian_block(Eigen::Index rows, Eigen::Index cols, double variance,
                             RngStream& stream) {
  const double scale = std::sqrt(variance / 2.0);
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = stream.normal();
      const double im = stream.normal();
      out(i, j) = Complex(scale * re, scale * im);
    }
  }
  return out;
}

ComplexMatrix stiefel(Eigen::Index m, Eigen::Index n, RngStream& stream) {
  const ComplexMatrix z = gaussian_block(n, m, 1.0, stream);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = ComplexMatrix::Identity(n, m);
  q.applyOnTheLeft(qr.householderQ());
  // Rotating each column by the phase of R_ii makes the factorization
  // unique, which is what makes Q Haar distributed.
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < m; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q.adjoint();
}

ComplexMatrix spherical_rows(const CompressorSpec& spec, RngStream& stream) {
  ComplexMatrix out(spec.m, spec.n);
  for (Eigen::Index i = 0; i < spec.m; ++i) {
    ComplexMatrix dir = gaussian_block(1, spec.n, 1.0, stream);
    dir /= dir.norm();
    double radius = 0.0;
    switch (spec.radial) {
      case RadialLaw::kChi: {
        // |CN(0, v I_n)|^2 is (v/2) chi^2 with 2n degrees of freedom.
        double chi2 = 0.0;
        for (Eigen::Index k = 0; k < 2 * spec.n; ++k) {
          const double z = stream.normal();
          chi2 += z * z;
        }
        radius = std::sqrt(0.5 * spec.element_variance * chi2);
        break;
      }
      case RadialLaw::kConstant:
        radius = std::sqrt(static_cast<double>(spec.n) * spec.element_variance);
        break;
    }
    out.row(i) = radius * dir;
  }
  return out;
}

}  // namespace

ComplexMatrix sample(const CompressorSpec& spec, RngStream& stream) {
  spec.validate();
  switch (spec.family) {
    case CompressorFamily::kGaussian:
      return gaussian_block(spec.m, spec.n, spec.element_variance, stream);
    case CompressorFamily::kStiefel:
      return stiefel(spec.m, spec.n, stream);
    case CompressorFamily::kSphericalRows:
      return spherical_rows(spec, stream);
  }
  throw Error(ErrorCode::kBadSpec, "compressor: unknown family");
}

ComplexMatrix sample_trial(const CompressorSpec& spec, std::uint64_t trial) {
  RngStream stream = derive_stream(spec.seed, trial);
  return sample(spec, stream);
}

}  // namespace crbc
