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

#ifndef FEASIDIST_PIECEWISE_LINEAR_HPP
#define FEASIDIST_PIECEWISE_LINEAR_HPP

#include <utility>
#include <vector>

namespace feasidist {

// Continuous piecewise-linear function on [xs.front(), xs.back()], zero
// outside.  Strictly increasing node positions; one value per node, so the
// represented function is continuous by construction.  All queries below are
// exact for this function class (no quadrature, no sampling).
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  std::size_t size() const { return xs_.size(); }

  double operator()(double x) const;

  // Exact integral over the whole domain (trapezoid rule is exact here).
  double integral() const;

  // Exact integral over [lo(), x]; 0 left of the domain, total to the right.
  double integral_to(double x) const;

  // Exact min/max of the function over [a, b] intersected with the domain.
  // Outside-domain parts of [a, b] contribute the value 0.
  double min_on(double a, double b) const;
  double max_on(double a, double b) const;

  // Exact modulus of continuity at width eps over the window [a, b]:
  //   sup { max - min over [t, t+eps] : [t, t+eps] within [a, b] }.
  // Candidate window anchors are node positions and node positions minus eps;
  // between consecutive candidates the window max and min are both linear in
  // the anchor, so the sup is attained at a candidate.
  double modulus_of_continuity(double eps, double a, double b) const;

  // Closed intervals {x in [a, b] : value >= threshold}, exact endpoints.
  std::vector<std::pair<double, double>> super_level_set(double threshold,
                                                         double a,
                                                         double b) const;

  // Smallest x with integral_to(x) == p, for p in [0, integral()].  Exact
  // per-segment quadratic solve; requires the function to be nonnegative.
  double inverse_prefix(double p) const;

  // Largest absolute segment slope.
  double max_abs_slope() const;

  // Pointwise combination c1*f1 + c2*f2 on the merged node set.  The result
  // is exact at every node of either input (values may be negative; callers
  // validate sign where it matters).
  static PiecewiseLinear combine(double c1, const PiecewiseLinear& f1,
                                 double c2, const PiecewiseLinear& f2);

  // Multiply all values by c.
  void scale(double c);

 private:
  std::size_t segment_of(double x) const;  // index i with xs_[i] <= x <= xs_[i+1]

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> cum_;  // cum_[i] = exact integral over [xs_[0], xs_[i]]
};

// count evenly spaced points from a to b inclusive (count >= 2).
std::vector<double> linspace(double a, double b, std::size_t count);

}  // namespace feasidist

#endif  // FEASIDIST_PIECEWISE_LINEAR_HPP
