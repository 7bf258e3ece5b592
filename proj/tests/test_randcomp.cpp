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
#include <cstring>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "crbc/error.hpp"
#include "crbc/mcharness.hpp"
#include "crbc/randcomp.hpp"
#include "test_support.hpp"

using namespace crbc;

namespace {

CompressorSpec spec_of(CompressorFamily f, Eigen::Index m, Eigen::Index n, std::uint64_t seed = 5) {
  return CompressorSpec{m, n, f, 1.0, RadialLaw::kChi, seed};
}

const CompressorFamily kFamilies[] = {CompressorFamily::kGaussian, CompressorFamily::kStiefel,
                                      CompressorFamily::kSphericalRows};

bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms are in the open unit interval and normals are standard") {
  RngStream s(3, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
  for (int k = 0; k < n; ++k) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("gaussian entries have unit complex variance") {
  const CompressorSpec spec = spec_of(CompressorFamily::kGaussian, 1, 1);
  const int draws = 100000;
  double sum = 0.0, re2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const Complex z = sample_trial(spec, t)(0, 0);
    sum += std::norm(z);
    re2 += z.real() * z.real();
  }
  // |z|^2 is Exp(1): standard deviation of the mean is 1/sqrt(N).
  CHECK(std::abs(sum / draws - 1.0) < 3.0 / std::sqrt(draws));
  CHECK(std::abs(re2 / draws - 0.5) < 3.0 * std::sqrt(0.5 / draws));
}

TEST_CASE("element variance scales gaussian entries") {
  CompressorSpec spec = spec_of(CompressorFamily::kGaussian, 4, 8);
  const ComplexMatrix a = sample_trial(spec, 7);
  spec.element_variance = 0.25;
  const ComplexMatrix b = sample_trial(spec, 7);
  CHECK((b - 0.5 * a).norm() < 1e-14);
}

TEST_CASE("stiefel rows are orthonormal") {
  const CompressorSpec spec = spec_of(CompressorFamily::kStiefel, 4, 16);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix phi = sample_trial(spec, t);
    CHECK((phi * phi.adjoint() - ComplexMatrix::Identity(4, 4)).norm() < 1e-10);
  }
  const ComplexMatrix sq = sample_trial(spec_of(CompressorFamily::kStiefel, 6, 6), 0);
  CHECK((sq * sq.adjoint() - ComplexMatrix::Identity(6, 6)).norm() < 1e-10);
}

TEST_CASE("spherical rows with a constant radial law") {
  CompressorSpec spec = spec_of(CompressorFamily::kSphericalRows, 5, 20);
  spec.radial = RadialLaw::kConstant;
  spec.element_variance = 0.5;
  const ComplexMatrix phi = sample_trial(spec, 2);
  for (int r = 0; r < 5; ++r) CHECK(std::abs(phi.row(r).norm() - std::sqrt(10.0)) < 1e-12);
}

TEST_CASE("spherical rows with the chi radial law match gaussian row energy") {
  const CompressorSpec spec = spec_of(CompressorFamily::kSphericalRows, 2, 16);
  double sum = 0.0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) sum += sample_trial(spec, t).row(0).squaredNorm();
  // ||row||^2 is Gamma(16, 1): mean 16, sd 4.
  CHECK(std::abs(sum / draws - 16.0) < 3.0 * 4.0 / std::sqrt(draws));
}

TEST_CASE("fixed seed and trial give bit-identical draws") {
  for (auto f : kFamilies) {
    const CompressorSpec spec = spec_of(f, 6, 12, 1234);
    CHECK(bitwise_equal(sample_trial(spec, 3), sample_trial(spec, 3)));
    RngStream s = derive_stream(1234, 3);
    CHECK(bitwise_equal(sample(spec, s), sample_trial(spec, 3)));
  }
}

TEST_CASE("different trials and seeds give different draws") {
  const CompressorSpec spec = spec_of(CompressorFamily::kGaussian, 3, 5, 1);
  CHECK_FALSE(bitwise_equal(sample_trial(spec, 0), sample_trial(spec, 1)));
  CHECK_FALSE(bitwise_equal(sample_trial(spec, 0), sample_trial(spec_of(CompressorFamily::kGaussian, 3, 5, 2), 0)));
}

TEST_CASE("shuffled trial order yields the same per-trial matrices") {
  const CompressorSpec spec = spec_of(CompressorFamily::kSphericalRows, 4, 9, 77);
  std::vector<ComplexMatrix> in_order;
  for (int t = 0; t < 100; ++t) in_order.push_back(sample_trial(spec, t));
  std::vector<int> order(100);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(4));
  for (int t : order) CHECK(bitwise_equal(sample_trial(spec, t), in_order[t]));
}

TEST_CASE("distribution is invariant under right unitary rotation") {
  const int n = 8, draws = 10000;
  const ComplexMatrix u = ComplexMatrix(oracle::random_complex(n, n, 3).householderQr().householderQ());
  for (auto f : kFamilies) {
    const CompressorSpec spec = spec_of(f, 3, n, 11);
    std::vector<double> a1, b1, a2, b2;
    for (int t = 0; t < draws; ++t) {
      const ComplexMatrix phi = sample_trial(spec, t);
      const ComplexMatrix rotated = sample_trial(spec, draws + t) * u;
      a1.push_back(std::abs(phi(0, 0)));
      b1.push_back(std::abs(rotated(0, 0)));
      // Rounded so that stiefel's constant unit norm compares as a tie.
      a2.push_back(std::round(phi.row(0).norm() * 1e10) / 1e10);
      b2.push_back(std::round(rotated.row(0).norm() * 1e10) / 1e10);
    }
    CHECK(ks_two_sample(a1, b1, 0.01).pass);
    CHECK(ks_two_sample(a2, b2, 0.01).pass);
  }
}

TEST_CASE("every family has full row rank") {
  const int draws = 100000;
  for (auto f : kFamilies) {
    const CompressorSpec spec = spec_of(f, 8, 32, 21);
    double smallest = INFINITY;
    for (int t = 0; t < draws; ++t) {
      const ComplexMatrix phi = sample_trial(spec, t);
      const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(phi * phi.adjoint(), Eigen::EigenvaluesOnly);
      smallest = std::min(smallest, std::sqrt(std::max(0.0, es.eigenvalues()[0])));
    }
    CHECK(smallest > 1e-8);
  }
}

TEST_CASE("compressor validation and family names") {
  CHECK_THROWS_AS(sample_trial(spec_of(CompressorFamily::kGaussian, 5, 4), 0), Error);
  CHECK_THROWS_AS(sample_trial(spec_of(CompressorFamily::kGaussian, 0, 4), 0), Error);
  CompressorSpec bad = spec_of(CompressorFamily::kGaussian, 2, 4);
  bad.element_variance = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  for (auto f : kFamilies) CHECK(parse_family(family_name(f)) == f);
  CHECK(parse_radial_law("constant") == RadialLaw::kConstant);
  CHECK_THROWS_AS(parse_family("toeplitz"), Error);
}
