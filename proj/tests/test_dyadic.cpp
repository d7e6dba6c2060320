// Copyright 2026 The feasidist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "feasidist/common.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/dyadic.hpp"
#include "feasidist/piecewise_linear.hpp"
#include "feasidist/rng.hpp"

namespace {

using feasidist::branching_from_density;
using feasidist::branching_from_envelope;
using feasidist::branching_from_list;
using feasidist::CdfEnvelope;
using feasidist::DyadicModel;
using feasidist::linspace;
using feasidist::PiecewiseLinear;
using feasidist::Rng;
using feasidist::SamplerState;
using feasidist::TargetDensity;
using feasidist::triangle_kernel;
using feasidist::triangle_kernel_cdf;
using feasidist::ValidationError;

DyadicModel constant_model(double kappa) {
  return DyadicModel(branching_from_list({kappa}));
}

}  // namespace

TEST_SUITE("dyadic") {

TEST_CASE("triangle kernel shape and mass") {
  CHECK(triangle_kernel(-0.5) == 0.0);
  CHECK(triangle_kernel(0.0) == 0.0);
  CHECK(triangle_kernel(0.5) == 0.5);
  CHECK(triangle_kernel(1.0) == 1.0);
  CHECK(triangle_kernel(1.5) == 0.5);
  CHECK(triangle_kernel(2.0) == 0.0);
  CHECK(triangle_kernel(2.5) == 0.0);

  CHECK(triangle_kernel_cdf(0.0) == 0.0);
  CHECK(triangle_kernel_cdf(0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(triangle_kernel_cdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(triangle_kernel_cdf(1.5) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(triangle_kernel_cdf(2.0) == 1.0);
  CHECK(triangle_kernel_cdf(3.0) == 1.0);
}

TEST_CASE("binary-splitting model has exact dyadic tail masses") {
  const DyadicModel m = constant_model(1.0);
  CHECK(m.level_tail(0) == 1.0);
  CHECK(m.level_tail(1) == 0.5);
  CHECK(m.level_tail(10) == std::ldexp(1.0, -10));
  CHECK(m.level_weight(0) == 0.5);
  CHECK(m.level_weight(3) == std::ldexp(1.0, -4));

  // Pair-distance CDF at dyadic support edges equals the tail mass.
  CHECK(m.pair_cdf(4.0) == 1.0);
  CHECK(m.pair_cdf(2.0) == 0.5);
  CHECK(m.pair_cdf(1.0) == 0.25);
  CHECK(m.pair_cdf(0.5) == 0.125);
  CHECK(m.pair_cdf(std::ldexp(4.0, -20)) == std::ldexp(1.0, -20));
  CHECK(m.pair_cdf(0.0) == 0.0);
  CHECK(m.pair_cdf(5.0) == 1.0);

  // Interior closed form: halfway up the level-0 kernel.
  CHECK(m.pair_cdf(3.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.pair_density(3.0) == doctest::Approx(1.0).epsilon(1e-15));
  // Zeros at the kernel edges: only the middle parity shift survives kappa=1.
  CHECK(m.pair_density(2.5) == 0.0);
  CHECK(m.pair_density(2.0) == 0.0);
  CHECK(m.pair_density(4.0) == 0.0);
}

TEST_CASE("per-level density peaks at the even-odd shift") {
  const DyadicModel one = constant_model(1.0);
  // Level n density is 2^(n+1) * phi(2^(n+1) x - 5): peak 2^(n+1) at
  // 6 * 2^-(n+1), zero at 5 * 2^-(n+1).
  CHECK(one.level_density(0, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(one.level_density(2, 0.75) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(one.level_density(0, 2.5) == 0.0);
  CHECK(one.level_density(1, 1.25) == 0.0);

  const DyadicModel three = constant_model(3.0);
  // kappa=3 mixes parities 0.2 / 0.6 / 0.2.
  CHECK(three.level_density(0, 3.0) == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(three.level_density(0, 2.5) == doctest::Approx(2.0 * 0.2).epsilon(1e-15));

  // Unit integral per level, trapezoid on a fine grid.
  for (std::size_t n : {std::size_t{0}, std::size_t{3}}) {
    const double lo = std::ldexp(4.0, -static_cast<int>(n) - 1);
    const double hi = std::ldexp(4.0, -static_cast<int>(n));
    const auto grid = linspace(lo, hi, 8193);
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double a = three.level_density(n, grid[i]);
      const double b = three.level_density(n, grid[i + 1]);
      integral += 0.5 * (a + b) * (grid[i + 1] - grid[i]);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("six-way splitting model tail masses") {
  const DyadicModel m = constant_model(3.0);
  CHECK(m.level_tail(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(m.pair_cdf(2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(m.pair_cdf(1.0) == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
}

TEST_CASE("level weights and final tail telescope to one") {
  const std::vector<std::vector<double>> fixtures = {
      {1.0}, {3.0}, {1.0, 2.0, 4.0, 8.0}, {7.0, 1.0, 5.0}};
  for (const auto& list : fixtures) {
    const DyadicModel m(branching_from_list(list));
    for (std::size_t cap = 1; cap <= 40; ++cap) {
      double sum = 0.0;
      for (std::size_t n = 0; n < cap; ++n) sum += m.level_weight(n);
      sum += m.level_tail(cap);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("explicit branching lists repeat their last entry") {
  const DyadicModel m(branching_from_list({1.0, 2.0}));
  CHECK(m.kappa(0) == 1.0);
  CHECK(m.kappa(1) == 2.0);
  CHECK(m.kappa(5) == 2.0);
  CHECK_THROWS_AS(branching_from_list({}), ValidationError);
  CHECK_THROWS_AS(branching_from_list({0.5}), ValidationError);
  CHECK_THROWS_AS(branching_from_list({2.5}), ValidationError);
}

TEST_CASE("envelope interpolation modes") {
  const CdfEnvelope lin({0.5, 1.0}, {0.5, 1.0}, CdfEnvelope::Mode::kLinear);
  CHECK(lin.value(0.75) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(lin.value(0.25) == 0.5);  // clamps at the left node
  CHECK(lin.value(2.0) == 1.0);   // clamps at the right node

  const CdfEnvelope loglog({0.5, 1.0}, {0.5, 1.0}, CdfEnvelope::Mode::kLogLog);
  // Unit log-log slope extrapolates the identity below the first node.
  CHECK(loglog.value(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(loglog.value(std::ldexp(1.0, -10)) ==
        doctest::Approx(std::ldexp(1.0, -10)).epsilon(1e-12));

  const CdfEnvelope quad({0.5, 1.0}, {0.25, 1.0}, CdfEnvelope::Mode::kLogLog);
  // Log-log slope two extrapolates the square.
  CHECK(quad.value(0.25) == doctest::Approx(0.0625).epsilon(1e-12));

  CHECK_THROWS_AS(CdfEnvelope({0.5}, {0.5}, CdfEnvelope::Mode::kLinear),
                  ValidationError);
  CHECK_THROWS_AS(
      CdfEnvelope({0.5, 1.0}, {0.5, 0.4}, CdfEnvelope::Mode::kLinear),
      ValidationError);
  CHECK_THROWS_AS(
      CdfEnvelope({0.5, 1.0}, {0.0, 1.0}, CdfEnvelope::Mode::kLinear),
      ValidationError);
}

TEST_CASE("envelope rule doubles branching against the identity bound") {
  const CdfEnvelope env({0.5, 1.0}, {0.5, 1.0}, CdfEnvelope::Mode::kLogLog);
  const DyadicModel m(branching_from_envelope(env));
  const auto prefix = m.kappa_prefix(6);
  REQUIRE(prefix.size() == 6);
  for (std::size_t n = 0; n < prefix.size(); ++n) {
    CHECK(prefix[n] == std::ldexp(1.0, static_cast<int>(n)));
  }
  // The produced model dominates the envelope from below.
  for (double eps : linspace(0.002, 2.0, 500)) {
    CHECK(m.pair_cdf(eps) <= std::min(1.0, eps) + 1e-15);
  }
}

TEST_CASE("envelope rule with the square envelope") {
  const CdfEnvelope env({0.5, 1.0}, {0.25, 1.0}, CdfEnvelope::Mode::kLogLog);
  const DyadicModel m(branching_from_envelope(env));
  const auto prefix = m.kappa_prefix(4);
  REQUIRE(prefix.size() == 4);
  CHECK(prefix[0] == 1.0);
  CHECK(prefix[1] == 4.0);
  CHECK(prefix[2] == 16.0);
  CHECK(prefix[3] == 64.0);
  for (double eps : linspace(0.002, 2.0, 500)) {
    CHECK(m.pair_cdf(eps) <= std::min(1.0, eps * eps) + 1e-15);
  }
}

TEST_CASE("trivial envelope reduces to binary splitting") {
  const CdfEnvelope env({1.0, 2.0}, {1.0, 1.0}, CdfEnvelope::Mode::kLinear);
  const DyadicModel m(branching_from_envelope(env));
  CHECK(m.kappa(0) == 1.0);
  CHECK(m.kappa(7) == 1.0);
  CHECK(m.pair_cdf(1.0) == 0.25);
}

TEST_CASE("density rule matches the flat-density closed form") {
  const TargetDensity flat(PiecewiseLinear({0.0, 1.0}, {1.0, 1.0}), 1.0);
  const DyadicModel m(branching_from_density(flat));
  const auto prefix = m.kappa_prefix(5);
  REQUIRE(prefix.size() == 5);
  for (std::size_t n = 0; n < prefix.size(); ++n) {
    CHECK(prefix[n] == std::ldexp(1.0, static_cast<int>(n) + 1));
  }
}

TEST_CASE("density rule needs a unit positivity radius") {
  const TargetDensity narrow(PiecewiseLinear({0.0, 2.0}, {1.0, 0.0}), 0.5);
  CHECK_THROWS_WITH_AS(branching_from_density(narrow),
                       doctest::Contains("positivity radius"),
                       ValidationError);
}

TEST_CASE("root-distance sampler is one plus a uniform") {
  const DyadicModel m = constant_model(3.0);
  Rng rng(SamplerState{42, 0});
  const std::size_t n = 50000;
  std::vector<double> draws(n);
  for (auto& d : draws) {
    d = m.sample_root_distance(rng);
    REQUIRE(d >= 1.0);
    REQUIRE(d <= 2.0);
  }
  struct ShiftedUniform final : feasidist::Cdf {
    double operator()(double x) const override {
      return std::clamp(x - 1.0, 0.0, 1.0);
    }
  };
  CHECK(feasidist::ks_statistic(draws, ShiftedUniform{}) <= 0.01);
}

TEST_CASE("pair-distance sampler matches the closed-form cdf") {
  for (double kappa : {1.0, 3.0}) {
    const DyadicModel m = constant_model(kappa);
    Rng rng(SamplerState{42, 1});
    const std::size_t n = 50000;
    std::vector<double> draws(n);
    for (auto& d : draws) {
      d = m.sample_pair_distance(rng);
      REQUIRE(d > 0.0);
      REQUIRE(d <= 4.0);
    }
    struct ModelCdf final : feasidist::Cdf {
      explicit ModelCdf(const DyadicModel& m) : m_(&m) {}
      double operator()(double x) const override { return m_->pair_cdf(x); }
      const DyadicModel* m_;
    };
    CHECK(feasidist::ks_statistic(draws, ModelCdf(m)) <= 0.011);
  }
}

TEST_CASE("deep levels stay addressable") {
  const DyadicModel m = constant_model(1.0);
  CHECK(m.level_count() >= 1000);
  CHECK(m.level_tail(static_cast<std::size_t>(1080)) == 0.0);
  CHECK_THROWS_AS(m.kappa(m.level_count()), ValidationError);
}

}  // TEST_SUITE
