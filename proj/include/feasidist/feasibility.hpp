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

#ifndef FEASIDIST_FEASIBILITY_HPP
#define FEASIDIST_FEASIBILITY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "feasidist/piecewise_linear.hpp"
#include "feasidist/tree.hpp"

namespace feasidist {

// Candidate distance law to be screened: an optional atomic part (masses may
// sum to less than one, unlike DiscreteDistribution) plus an optional
// piecewise-linear density part; the two masses sum to one.
class TargetSpec {
 public:
  TargetSpec(std::vector<double> atom_locations, std::vector<double> atom_masses,
             std::optional<PiecewiseLinear> continuous);

  const std::vector<double>& atom_locations() const { return atom_locations_; }
  const std::vector<double>& atom_masses() const { return atom_masses_; }
  const std::optional<PiecewiseLinear>& continuous() const { return continuous_; }

 private:
  std::vector<double> atom_locations_;
  std::vector<double> atom_masses_;
  std::optional<PiecewiseLinear> continuous_;
};

enum class FeasibilityVerdict {
  kInfeasibleNoZeroSupport,
  kInfeasibleProp3,
  kFeasibleByThm1,
  kFeasibleByCor1,
  kUnknown,
};

// Stable CLI spellings: "infeasible-no-zero-support", "infeasible-prop3",
// "feasible-by-thm1", "feasible-by-cor1", "unknown".
std::string to_string(FeasibilityVerdict verdict);

// Screens a target spec with exact structural checks (no sampling): a law without
// zero in its support is infeasible; an isolated atom at zero next to a
// density bounded away from zero is infeasible; finite atomic laws with an
// atom at zero are constructible; densities positive just right of zero are
// achievable by a random space; everything else is left undecided.
FeasibilityVerdict classify(const TargetSpec& spec);

// One covering-bound check: exact P(D <= eps) against the reciprocal of a
// greedy eps/2-net size over all tree vertices.  The greedy net count is at
// least the true covering number, so the verdict must come back true for
// every correctly built space.
struct CoveringReport {
  double eps = 0.0;
  std::size_t m_greedy = 0;  // greedy upper bound on the covering number
  double p_le_eps = 0.0;     // exact two-point P(D <= eps)
  bool verdict = false;      // p_le_eps >= 1 / m_greedy
};

CoveringReport covering_bound_check(const TreeStructure& t, double eps);

// Same check across a grid, enumerating the two-point law once.
std::vector<CoveringReport> covering_sweep(const TreeStructure& t,
                                           const std::vector<double>& eps_values);

}  // namespace feasidist

#endif  // FEASIDIST_FEASIBILITY_HPP
