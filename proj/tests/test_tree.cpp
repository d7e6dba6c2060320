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
#include <cstddef>
#include <random>
#include <vector>

#include "doctest.h"
#include "feasidist/common.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/rng.hpp"
#include "feasidist/tree.hpp"

namespace {

using feasidist::Atom;
using feasidist::BuildCaps;
using feasidist::build_finite;
using feasidist::ConstructionError;
using feasidist::exact_two_point;
using feasidist::analytic_two_point;
using feasidist::FiniteTarget;
using feasidist::projected_leaf_count;
using feasidist::sample_npoint_matrix;
using feasidist::sample_two_point;
using feasidist::SamplerState;
using feasidist::solve_weight_split;
using feasidist::StepCdf;
using feasidist::total_variation_atoms;
using feasidist::TreeStructure;
using feasidist::ValidationError;

// Random finite target with k nonzero distances; masses strictly positive.
FiniteTarget random_target(std::mt19937_64& gen, std::size_t k) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> masses(k + 1);
  double total = 0.0;
  for (auto& m : masses) {
    m = unit(gen);
    total += m;
  }
  std::vector<Atom> atoms;
  double d = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    atoms.push_back({d, masses[i] / total});
    d += 0.25 + unit(gen);
  }
  // Re-normalize the exact float sum so construction accepts the target.
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.mass;
  for (auto& a : atoms) a.mass /= sum;
  return FiniteTarget(std::move(atoms));
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("weight split solves the two power-sum constraints exactly") {
  SUBCASE("quarter mass splits into four equal parts") {
    const auto split = solve_weight_split(0.25);
    REQUIRE(split.j == 4);
    for (double w : split.weights) CHECK(w == 0.25);
  }
  SUBCASE("half mass splits in two") {
    const auto split = solve_weight_split(0.5);
    REQUIRE(split.j == 2);
    CHECK(split.weights[0] == 0.5);
    CHECK(split.weights[1] == 0.5);
  }
  SUBCASE("three-quarter mass takes an asymmetric pair") {
    const auto split = solve_weight_split(0.75);
    REQUIRE(split.j == 2);
    // a = (1 - sqrt(2*0.75 - 1)) / 2, partner 1 - a.
    CHECK(split.weights[0] ==
          doctest::Approx((1.0 - std::sqrt(0.5)) / 2.0).epsilon(1e-15));
    CHECK(split.weights[1] ==
          doctest::Approx(1.0 - (1.0 - std::sqrt(0.5)) / 2.0).epsilon(1e-15));
  }
  SUBCASE("j is the least count with 1/j below the target") {
    CHECK(solve_weight_split(0.34).j == 3);
    CHECK(solve_weight_split(1.0).j == 1);
    CHECK(solve_weight_split(1.0).weights[0] == 1.0);
  }
  SUBCASE("rejects targets outside the unit interval") {
    CHECK_THROWS_WITH_AS(solve_weight_split(0.0),
                         doctest::Contains("invalid squared-mass target"),
                         ValidationError);
    CHECK_THROWS_AS(solve_weight_split(-0.5), ValidationError);
    CHECK_THROWS_AS(solve_weight_split(1.5), ValidationError);
  }
  SUBCASE("random targets satisfy both constraints to 1e-12") {
    std::mt19937_64 gen(2026);
    std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 1000; ++i) {
      const double s = unit(gen);
      const auto split = solve_weight_split(s);
      double sum = 0.0;
      double sq = 0.0;
      for (double w : split.weights) {
        CHECK(w > 0.0);
        sum += w;
        sq += w * w;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(sq == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("hand-built two-leaf tree") {
  const TreeStructure t({-1, 0, 0}, {0.0, 1.0, 1.0}, 0, {1, 2}, {0.5, 0.5});
  CHECK(t.node_count() == 3);
  CHECK(t.depth(0) == 0.0);
  CHECK(t.depth(1) == 1.0);
  CHECK(t.is_leaf(1));
  CHECK(!t.is_leaf(0));
  CHECK(t.leaf_distance(1, 2) == 2.0);
  CHECK(t.leaf_distance(1, 1) == 0.0);
  CHECK_THROWS_AS(t.leaf_distance(0, 1), ValidationError);

  const auto law = exact_two_point(t);
  REQUIRE(law.values().size() == 2);
  CHECK(law.values()[0] == 0.0);
  CHECK(law.values()[1] == 2.0);
  CHECK(law.masses()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.masses()[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single-atom target builds a single point") {
  const auto t = build_finite(FiniteTarget({{0.0, 1.0}}));
  CHECK(t.node_count() == 1);
  const auto law = exact_two_point(t);
  REQUIRE(law.values().size() == 1);
  CHECK(law.values()[0] == 0.0);
}

TEST_CASE("constructed trees achieve their targets exactly") {
  const FiniteTarget target({{0.0, 0.3}, {2.0, 0.7}});
  const auto t = build_finite(target);
  const auto law = exact_two_point(t);
  CHECK(total_variation_atoms(law, target) <= 1e-12);

  // All leaves at half the largest distance.
  for (int node : t.mass_nodes()) {
    CHECK(t.depth(node) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("recursion replay matches the materialized enumeration") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto target = random_target(gen, 1 + trial % 4);
    const auto direct = analytic_two_point(target);
    const auto via_tree = exact_two_point(build_finite(target));
    CHECK(total_variation_atoms(via_tree, direct) <= 1e-11);
    CHECK(total_variation_atoms(via_tree, target) <= 1e-9);
  }
}

TEST_CASE("leaf depth invariant holds on random targets") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto target = random_target(gen, 3);
    const auto t = build_finite(target);
    const double want = target.largest_distance() / 2.0;
    for (int node : t.mass_nodes()) {
      CHECK(std::abs(t.depth(node) - want) <= 1e-12);
    }
  }
}

TEST_CASE("projected leaf count matches the built tree") {
  const FiniteTarget target({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(projected_leaf_count(target) == doctest::Approx(2.0));
  const auto t = build_finite(target);
  CHECK(t.mass_nodes().size() == 2);
}

TEST_CASE("leaf cap aborts oversized constructions") {
  const FiniteTarget target(
      {{0.0, 0.05}, {1.0, 0.05}, {2.0, 0.4}, {3.0, 0.5}});
  BuildCaps caps;
  caps.max_leaves = 3;
  CHECK_THROWS_AS(build_finite(target, caps), ConstructionError);
}

TEST_CASE("pair sampler reproduces the exact law") {
  const FiniteTarget target({{0.0, 0.3}, {1.0, 0.2}, {2.5, 0.5}});
  const auto t = build_finite(target);
  const auto law = exact_two_point(t);
  const auto sample = sample_two_point(t, 20000, SamplerState{42, 0});
  REQUIRE(sample.values.size() == 20000);
  const double ks = feasidist::ks_statistic(sample.values, StepCdf(law));
  CHECK(ks <= 0.02);
  // Deterministic replay.
  const auto again = sample_two_point(t, 20000, SamplerState{42, 0});
  CHECK(sample.values == again.values);
}

TEST_CASE("n-point matrices are symmetric with zero diagonal") {
  const FiniteTarget target({{0.0, 0.3}, {1.0, 0.2}, {2.5, 0.5}});
  const auto t = build_finite(target);
  const auto m = sample_npoint_matrix(t, 4, SamplerState{7, 0});
  REQUIRE(m.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(m[i].size() == 4);
    CHECK(m[i][i] == 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(m[i][j] == m[j][i]);
      CHECK(m[i][j] >= 0.0);
      CHECK(m[i][j] <= target.largest_distance() + 1e-12);
    }
  }
  const auto again = sample_npoint_matrix(t, 4, SamplerState{7, 0});
  CHECK(m == again);
}

}  // TEST_SUITE
