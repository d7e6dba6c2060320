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

#ifndef FEASIDIST_DYADIC_HPP
#define FEASIDIST_DYADIC_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "feasidist/distributions.hpp"
#include "feasidist/rng.hpp"

namespace feasidist {

// Density of the sum of two independent Uniform[0,1] variables: x on [0,1],
// 2-x on [1,2], zero elsewhere.
double triangle_kernel(double x);

// Its CDF: t^2/2 on [0,1], 1-(2-t)^2/2 on [1,2], clamped outside.
double triangle_kernel_cdf(double t);

// Non-decreasing bound for small-distance CDF values, tabulated on positive
// nodes with values in ]0,1].  Linear mode interpolates in x and clamps
// outside the node range; LogLog mode interpolates linearly in (log x, log F)
// and extrapolates below the first node with the first segment's log-slope,
// which represents pure power laws exactly.
class CdfEnvelope {
 public:
  enum class Mode { kLinear, kLogLog };

  CdfEnvelope(std::vector<double> xs, std::vector<double> values, Mode mode);

  double value(double x) const;
  Mode mode() const { return mode_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> xs_;
  std::vector<double> values_;
  Mode mode_;
};

// Per-level branching counts kappa_n (node at height n has 2 kappa_n
// children).  Values are kept as doubles because selection rules can demand
// counts far beyond 2^63; they are exact integers whenever representable.
struct KappaSequence {
  enum class Origin { kExplicitList, kEnvelopeRule, kDensityRule };

  std::function<double(std::size_t)> rule;
  Origin origin = Origin::kExplicitList;
};

// Explicit prefix; levels beyond the list repeat the last entry.
KappaSequence branching_from_list(std::vector<double> kappas);

// kappa_n = ceil(1 / F(4 * 2^-(n+2))): makes the pair-distance CDF stay below
// the envelope on ]0, 2].
KappaSequence branching_from_envelope(CdfEnvelope envelope);

// kappa_n = max(1, ceil(2^(n+1) / g(4 * 2^-(n+2)))) with g(x) = min of f over
// [x^2, eta]: makes the pair-distance density fall below x * g(x) near 0.
// Requires eta >= 1 so every queried window [x^2, eta] is nonempty.
KappaSequence branching_from_density(const TargetDensity& f);

// Spherically symmetric infinite rooted tree studied through its level
// statistics: the boundary measure of non-backtracking descent, the level
// weights of the pair splitting depth, and the closed-form pair-distance
// density.  The tree itself is never materialized.
class DyadicModel {
 public:
  explicit DyadicModel(const KappaSequence& kappas);

  KappaSequence::Origin origin() const { return origin_; }
  // Number of levels until the tail mass underflows to zero.
  std::size_t level_count() const { return kappa_.size(); }
  double kappa(std::size_t n) const;

  // T_n = 1 / prod_{p<n} (2 kappa_p): mass of splitting depth >= n.
  double level_tail(std::size_t n) const;
  // w_n = T_n - T_{n+1}: mass of splitting depth exactly n.
  double level_weight(std::size_t n) const;

  // Density of the pair distance restricted to splitting depth n; supported
  // on [4*2^-(n+1), 4*2^-n], bounded by 2^(n+1), unit integral.
  double level_density(std::size_t n, double x) const;

  // Full pair-distance density (supported on [0, 4]) and its exact CDF.
  double pair_density(double x) const;
  double pair_cdf(double eps) const;

  // Distance from the root to a boundary point: distributed as 1 + U.
  double sample_root_distance(Rng& rng) const;
  // Distance between two independent boundary points.
  double sample_pair_distance(Rng& rng) const;

  // Leading branching counts for reports (at most `count` entries).
  std::vector<double> kappa_prefix(std::size_t count) const;

 private:
  std::vector<double> kappa_;
  std::vector<double> tail_;  // tail_[n] = T_n; one entry past kappa_.size()
  KappaSequence::Origin origin_;
};

}  // namespace feasidist

#endif  // FEASIDIST_DYADIC_HPP
