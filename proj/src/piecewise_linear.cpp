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

#include "feasidist/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "feasidist/common.hpp"

namespace feasidist {

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size()) {
    throw ValidationError("piecewise-linear function needs matching node and value lists (>= 2 nodes)");
  }
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (!(xs_[i] < xs_[i + 1])) {
      throw ValidationError("piecewise-linear node positions must be strictly increasing");
    }
  }
  for (double x : xs_) {
    if (!std::isfinite(x)) throw ValidationError("piecewise-linear node positions must be finite");
  }
  for (double y : ys_) {
    if (!std::isfinite(y)) throw ValidationError("piecewise-linear values must be finite");
  }
  cum_.resize(xs_.size());
  NeumaierSum acc;
  cum_[0] = 0.0;
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    acc.add(0.5 * (ys_[i - 1] + ys_[i]) * (xs_[i] - xs_[i - 1]));
    cum_[i] = acc.value();
  }
}

std::size_t PiecewiseLinear::segment_of(double x) const {
  // Largest i with xs_[i] <= x, clamped to a valid segment start.
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  if (i == 0) return 0;
  if (i >= xs_.size()) return xs_.size() - 2;
  return i - 1;
}

double PiecewiseLinear::operator()(double x) const {
  if (x < xs_.front() || x > xs_.back()) return 0.0;
  const std::size_t i = segment_of(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  return ys_[i] + t * (ys_[i + 1] - ys_[i]);
}

double PiecewiseLinear::integral() const { return cum_.back(); }

double PiecewiseLinear::integral_to(double x) const {
  if (x <= xs_.front()) return 0.0;
  if (x >= xs_.back()) return cum_.back();
  const std::size_t i = segment_of(x);
  const double dx = x - xs_[i];
  const double fx = (*this)(x);
  return cum_[i] + 0.5 * (ys_[i] + fx) * dx;
}

double PiecewiseLinear::min_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  double best = std::numeric_limits<double>::infinity();
  // Any part of [a, b] outside the domain has value 0.
  if (a < xs_.front() || b > xs_.back()) best = 0.0;
  const double lo = std::max(a, xs_.front());
  const double hi = std::min(b, xs_.back());
  if (lo <= hi) {
    best = std::min(best, (*this)(lo));
    best = std::min(best, (*this)(hi));
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (xs_[i] > lo && xs_[i] < hi) best = std::min(best, ys_[i]);
    }
  }
  return best;
}

double PiecewiseLinear::max_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  double best = -std::numeric_limits<double>::infinity();
  if (a < xs_.front() || b > xs_.back()) best = 0.0;
  const double lo = std::max(a, xs_.front());
  const double hi = std::min(b, xs_.back());
  if (lo <= hi) {
    best = std::max(best, (*this)(lo));
    best = std::max(best, (*this)(hi));
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (xs_[i] > lo && xs_[i] < hi) best = std::max(best, ys_[i]);
    }
  }
  return best;
}

double PiecewiseLinear::modulus_of_continuity(double eps, double a, double b) const {
  if (!(eps > 0.0)) throw ValidationError("modulus width must be positive");
  if (b - a <= eps) {
    return max_on(a, b) - min_on(a, b);
  }
  std::vector<double> anchors;
  anchors.push_back(a);
  anchors.push_back(b - eps);
  for (double x : xs_) {
    if (x >= a && x <= b - eps) anchors.push_back(x);
    const double shifted = x - eps;
    if (shifted >= a && shifted <= b - eps) anchors.push_back(shifted);
  }
  double worst = 0.0;
  for (double t : anchors) {
    worst = std::max(worst, max_on(t, t + eps) - min_on(t, t + eps));
  }
  return worst;
}

std::vector<std::pair<double, double>> PiecewiseLinear::super_level_set(
    double threshold, double a, double b) const {
  std::vector<std::pair<double, double>> out;
  const double lo = std::max(a, xs_.front());
  const double hi = std::min(b, xs_.back());
  if (!(lo < hi) && !(lo == hi)) return out;
  auto push = [&out](double s, double e) {
    if (!out.empty() && s <= out.back().second) {
      out.back().second = std::max(out.back().second, e);
    } else {
      out.emplace_back(s, e);
    }
  };
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    const double x0 = xs_[i], x1 = xs_[i + 1];
    if (x1 < lo || x0 > hi) continue;
    const double s0 = std::max(x0, lo), s1 = std::min(x1, hi);
    if (s0 > s1) continue;
    const double v0 = (*this)(s0), v1 = (*this)(s1);
    if (v0 >= threshold && v1 >= threshold) {
      push(s0, s1);
    } else if (v0 >= threshold || v1 >= threshold) {
      // Single crossing inside (s0, s1); solve for the exact crossing point.
      const double t = (threshold - v0) / (v1 - v0);
      const double xc = s0 + t * (s1 - s0);
      if (v0 >= threshold) {
        push(s0, xc);
      } else {
        push(xc, s1);
      }
    }
  }
  return out;
}

double PiecewiseLinear::inverse_prefix(double p) const {
  const double total = cum_.back();
  if (p <= 0.0) return xs_.front();
  if (p >= total) return xs_.back();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), p);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  if (i == 0) return xs_.front();
  i -= 1;
  if (i + 1 >= xs_.size()) return xs_.back();
  const double r = p - cum_[i];
  const double h = xs_[i + 1] - xs_[i];
  const double v0 = ys_[i];
  const double slope = (ys_[i + 1] - ys_[i]) / h;
  if (r <= 0.0) return xs_[i];
  double t;
  if (slope == 0.0) {
    t = (v0 > 0.0) ? r / v0 : h;
  } else {
    const double disc = std::max(0.0, v0 * v0 + 2.0 * slope * r);
    const double denom = v0 + std::sqrt(disc);
    t = (denom > 0.0) ? 2.0 * r / denom : h;
  }
  return xs_[i] + std::min(t, h);
}

double PiecewiseLinear::max_abs_slope() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    worst = std::max(worst, std::abs((ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i])));
  }
  return worst;
}

PiecewiseLinear PiecewiseLinear::combine(double c1, const PiecewiseLinear& f1,
                                         double c2, const PiecewiseLinear& f2) {
  std::vector<double> xs;
  xs.reserve(f1.size() + f2.size());
  std::merge(f1.xs_.begin(), f1.xs_.end(), f2.xs_.begin(), f2.xs_.end(),
             std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ys[i] = c1 * f1(xs[i]) + c2 * f2(xs[i]);
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

void PiecewiseLinear::scale(double c) {
  for (double& y : ys_) y *= c;
  for (double& v : cum_) v *= c;
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  if (count < 2) throw ValidationError("linspace needs at least two points");
  std::vector<double> out(count);
  const double step = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = a + step * static_cast<double>(i);
  }
  out.back() = b;
  return out;
}

}  // namespace feasidist
