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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "feasidist/common.hpp"
#include "feasidist/piecewise_linear.hpp"

namespace {

using feasidist::linspace;
using feasidist::NeumaierSum;
using feasidist::PiecewiseLinear;
using feasidist::ValidationError;

// Ramp from 1 at x=0 down to 0 at x=2; integral 1.
PiecewiseLinear ramp() { return PiecewiseLinear({0.0, 2.0}, {1.0, 0.0}); }

// Hat with peak 1 at x=1 on [0, 2]; integral 1.
PiecewiseLinear hat() { return PiecewiseLinear({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}); }

}  // namespace

TEST_SUITE("numeric") {

TEST_CASE("compensated summation recovers a small term next to a huge one") {
  NeumaierSum sum;
  sum.add(1.0e100);
  sum.add(1.0);
  sum.add(-1.0e100);
  CHECK(sum.value() == 1.0);  // naive summation returns 0 here

  NeumaierSum tenth;
  for (int i = 0; i < 10; ++i) tenth.add(0.1);
  CHECK(tenth.value() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluation is exact at nodes, linear between, zero outside") {
  const PiecewiseLinear f = ramp();
  CHECK(f(0.0) == 1.0);
  CHECK(f(1.0) == 0.5);
  CHECK(f(2.0) == 0.0);
  CHECK(f(0.5) == 0.75);
  CHECK(f(-0.1) == 0.0);
  CHECK(f(2.1) == 0.0);

  const PiecewiseLinear h = hat();
  CHECK(h(0.25) == 0.25);
  CHECK(h(1.0) == 1.0);
  CHECK(h(1.75) == 0.25);
}

TEST_CASE("construction rejects malformed node lists") {
  CHECK_THROWS_AS(PiecewiseLinear({0.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 0.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(PiecewiseLinear({1.0, 0.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0}, {1.0}), ValidationError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(PiecewiseLinear({0.0, nan}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0}, {nan, 1.0}), ValidationError);
}

TEST_CASE("integral and prefix integral match hand integration") {
  const PiecewiseLinear f = ramp();
  CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-15));
  // integral_to(x) = x - x^2/4 for the ramp.
  CHECK(f.integral_to(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(f.integral_to(0.5) == doctest::Approx(0.5 - 0.0625).epsilon(1e-15));
  CHECK(f.integral_to(-1.0) == 0.0);
  CHECK(f.integral_to(5.0) == doctest::Approx(1.0).epsilon(1e-15));

  const PiecewiseLinear h = hat();
  CHECK(h.integral_to(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.integral_to(1.5) == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("min and max over windows, outside-domain parts count as zero") {
  const PiecewiseLinear f = ramp();
  CHECK(f.max_on(-1.0, 1.0) == 1.0);
  CHECK(f.min_on(0.5, 1.5) == 0.25);
  CHECK(f.max_on(0.5, 1.5) == 0.75);
  CHECK(f.min_on(1.0, 3.0) == 0.0);  // [2, 3] contributes the value 0
  CHECK(f.max_on(2.5, 3.0) == 0.0);

  const PiecewiseLinear h = hat();
  CHECK(h.max_on(0.0, 2.0) == 1.0);
  CHECK(h.max_on(0.25, 0.75) == 0.75);
  CHECK(h.min_on(0.25, 0.75) == 0.25);
}

TEST_CASE("modulus of continuity matches slope times width on straight pieces") {
  const PiecewiseLinear f = ramp();  // |slope| = 1/2 everywhere
  CHECK(f.modulus_of_continuity(0.1, 0.0, 2.0) ==
        doctest::Approx(0.05).epsilon(1e-15));
  CHECK(f.modulus_of_continuity(0.5, 0.0, 2.0) ==
        doctest::Approx(0.25).epsilon(1e-15));

  // Window straddling the hat peak: best window is one lying on one flank.
  const PiecewiseLinear h = hat();
  CHECK(h.modulus_of_continuity(0.5, 0.0, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.modulus_of_continuity(0.25, 0.5, 1.5) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("super level sets have exact endpoints") {
  const PiecewiseLinear h = hat();
  const auto half = h.super_level_set(0.5, 0.0, 2.0);
  REQUIRE(half.size() == 1);
  CHECK(half[0].first == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half[0].second == doctest::Approx(1.5).epsilon(1e-15));

  const PiecewiseLinear f = ramp();
  const auto quarter = f.super_level_set(0.25, 0.0, 2.0);
  REQUIRE(quarter.size() == 1);
  CHECK(quarter[0].first == 0.0);
  CHECK(quarter[0].second == doctest::Approx(1.5).epsilon(1e-15));

  CHECK(h.super_level_set(2.0, 0.0, 2.0).empty());

  // W shape: two disjoint intervals above the threshold.
  const PiecewiseLinear w({0.0, 1.0, 2.0, 3.0, 4.0}, {1.0, 0.0, 1.0, 0.0, 1.0});
  const auto parts = w.super_level_set(0.75, 0.0, 4.0);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].second == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(parts[1].first == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(parts[1].second == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("inverse prefix inverts the prefix integral") {
  const PiecewiseLinear f = ramp();
  CHECK(f.inverse_prefix(0.0) == 0.0);
  CHECK(f.inverse_prefix(0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.inverse_prefix(f.integral()) == doctest::Approx(2.0).epsilon(1e-12));
  for (double p : {0.1, 0.3, 0.5, 0.9, 0.99}) {
    const double x = f.inverse_prefix(p);
    CHECK(f.integral_to(x) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("combine is exact on the merged node set") {
  const PiecewiseLinear f = ramp();
  const PiecewiseLinear h = hat();
  const PiecewiseLinear c = PiecewiseLinear::combine(2.0, f, -1.0, h);
  // Values at merged nodes {0, 1, 2}: 2*1-0, 2*0.5-1, 2*0-0.
  CHECK(c(0.0) == 2.0);
  CHECK(c(1.0) == 0.0);
  CHECK(c(2.0) == 0.0);
  // Linear between nodes: at 0.5, 2*0.75 - 0.5 = 1.
  CHECK(c(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.integral() == doctest::Approx(2.0 * 1.0 - 1.0).epsilon(1e-14));

  // Disjoint-domain combine spans both supports.
  const PiecewiseLinear right({3.0, 4.0}, {1.0, 1.0});
  const PiecewiseLinear u = PiecewiseLinear::combine(1.0, f, 1.0, right);
  CHECK(u.lo() == 0.0);
  CHECK(u.hi() == 4.0);
  CHECK(u(3.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u(1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("scale multiplies values and integral") {
  PiecewiseLinear f = ramp();
  f.scale(2.0);
  CHECK(f(0.0) == 2.0);
  CHECK(f.integral() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("max_abs_slope reports the steepest segment") {
  CHECK(ramp().max_abs_slope() == doctest::Approx(0.5).epsilon(1e-15));
  const PiecewiseLinear steep({0.0, 0.25, 2.0}, {0.0, 1.0, 0.0});
  CHECK(steep.max_abs_slope() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("linspace endpoints are exact") {
  const auto two = linspace(0.25, 0.75, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.front() == 0.25);
  CHECK(two.back() == 0.75);

  const auto five = linspace(0.0, 1.0, 5);
  REQUIRE(five.size() == 5);
  CHECK(five[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(five[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(five.back() == 1.0);
}

}  // TEST_SUITE
