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

#include <vector>

#include "doctest.h"
#include "feasidist/common.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/piecewise_linear.hpp"

namespace {

using feasidist::Atom;
using feasidist::DensityCdf;
using feasidist::DiscreteDistribution;
using feasidist::FiniteTarget;
using feasidist::kolmogorov_distance;
using feasidist::ks_statistic;
using feasidist::PiecewiseLinear;
using feasidist::StepCdf;
using feasidist::TargetDensity;
using feasidist::total_variation_atoms;
using feasidist::ValidationError;

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("finite target validation") {
  CHECK_NOTHROW(FiniteTarget({{0.0, 0.25}, {2.0, 0.75}}));
  // First atom must sit at distance zero.
  CHECK_THROWS_AS(FiniteTarget({{1.0, 1.0}}), ValidationError);
  // Masses must sum to one.
  CHECK_THROWS_AS(FiniteTarget({{0.0, 0.25}, {2.0, 0.5}}), ValidationError);
  // Distances strictly increasing.
  CHECK_THROWS_AS(FiniteTarget({{0.0, 0.25}, {2.0, 0.25}, {2.0, 0.5}}),
                  ValidationError);
  // Masses strictly positive.
  CHECK_THROWS_AS(FiniteTarget({{0.0, 1.0}, {1.0, 0.0}}), ValidationError);

  const FiniteTarget t({{0.0, 0.3}, {1.0, 0.2}, {2.5, 0.5}});
  CHECK(t.k() == 2);
  CHECK(t.mass_at_zero() == 0.3);
  CHECK(t.largest_distance() == 2.5);
}

TEST_CASE("discrete distribution cdf and left limit") {
  const DiscreteDistribution d({0.0, 2.0}, {0.25, 0.75});
  CHECK(d.cdf(-0.5) == 0.0);
  CHECK(d.cdf(0.0) == 0.25);
  CHECK(d.cdf_left(0.0) == 0.0);
  CHECK(d.cdf(1.99) == 0.25);
  CHECK(d.cdf(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.cdf_left(2.0) == 0.25);
  CHECK(d.cdf(3.0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {0.5, 0.4}),
                  ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution({1.0, 0.0}, {0.5, 0.5}),
                  ValidationError);
}

TEST_CASE("target density validation") {
  const PiecewiseLinear ramp({0.0, 2.0}, {1.0, 0.0});
  CHECK_NOTHROW(TargetDensity(ramp, 1.5));
  // Domain must start at zero.
  CHECK_THROWS_AS(TargetDensity(PiecewiseLinear({0.5, 2.0}, {1.0, 0.0}), 1.0),
                  ValidationError);
  // Positivity radius must land inside the domain.
  CHECK_THROWS_AS(TargetDensity(ramp, 3.0), ValidationError);
  CHECK_THROWS_AS(TargetDensity(ramp, 0.0), ValidationError);
  // Unit mass within 1e-9.
  CHECK_THROWS_AS(TargetDensity(PiecewiseLinear({0.0, 2.0}, {1.1, 0.0}), 1.0),
                  ValidationError);
  // The density must stay positive on ]0, eta].
  CHECK_THROWS_AS(
      TargetDensity(PiecewiseLinear({0.0, 1.0, 2.0}, {2.0, 0.0, 0.0}), 1.5),
      ValidationError);
  // Negative values are rejected outright.
  CHECK_THROWS_AS(
      TargetDensity(PiecewiseLinear({0.0, 1.0, 2.0}, {2.2, -0.1, 0.1}), 0.5),
      ValidationError);

  const TargetDensity t(ramp, 1.5);
  CHECK(t.eta() == 1.5);
  CHECK(t(1.0) == 0.5);
}

TEST_CASE("one-sample KS statistic against a uniform reference") {
  const PiecewiseLinear flat({0.0, 1.0}, {1.0, 1.0});
  const DensityCdf uniform(flat);
  const std::vector<double> sample{0.9, 0.1, 0.5};  // order must not matter
  // Largest deviation: empirical 1/3 just past 0.1 vs F = 0.1 gives 7/30.
  CHECK(ks_statistic(sample, uniform) ==
        doctest::Approx(7.0 / 30.0).epsilon(1e-12));

  // A perfectly centered sample has deviation 1/(2n) on both sides.
  const std::vector<double> centered{0.125, 0.375, 0.625, 0.875};
  CHECK(ks_statistic(centered, uniform) ==
        doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("two-cdf distance on a grid sees atom mismatches") {
  const DiscreteDistribution at_zero({0.0}, {1.0});
  const DiscreteDistribution at_one({1.0}, {1.0});
  const StepCdf a(at_zero);
  const StepCdf b(at_one);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  CHECK(kolmogorov_distance(a, b, grid) == doctest::Approx(1.0));
  CHECK(kolmogorov_distance(a, a, grid) == 0.0);
}

TEST_CASE("total variation between atom lists") {
  const DiscreteDistribution a({0.0, 1.0}, {0.5, 0.5});
  const DiscreteDistribution b({0.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
  CHECK(total_variation_atoms(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(total_variation_atoms(a, a) == 0.0);

  // Locations within the merge tolerance are identified, not double-counted.
  const DiscreteDistribution c({0.0, 1.0 + 1e-13}, {0.5, 0.5});
  CHECK(total_variation_atoms(a, c) <= 1e-12);

  const FiniteTarget t({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(total_variation_atoms(a, t) == 0.0);
  CHECK(total_variation_atoms(b, t) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("density cdf clamps to the unit interval") {
  const PiecewiseLinear ramp({0.0, 2.0}, {1.0, 0.0});
  const DensityCdf cdf(ramp);
  CHECK(cdf(-1.0) == 0.0);
  CHECK(cdf(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cdf(10.0) == 1.0);
}

}  // TEST_SUITE
