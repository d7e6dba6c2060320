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

#include "feasidist/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "feasidist/common.hpp"

namespace feasidist {

FiniteTarget::FiniteTarget(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("target needs at least the atom at 0");
  if (atoms_.front().distance != 0.0) {
    throw ValidationError("target must place its first atom at distance exactly 0");
  }
  NeumaierSum total;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.distance) || !std::isfinite(a.mass)) {
      throw ValidationError("target atoms must be finite");
    }
    if (!(a.mass > 0.0) || a.mass > 1.0) {
      throw ValidationError("target atom masses must lie in ]0, 1]");
    }
    if (i > 0 && !(atoms_[i - 1].distance < a.distance)) {
      throw ValidationError("target atom distances must be strictly increasing");
    }
    total.add(a.mass);
  }
  if (std::abs(total.value() - 1.0) > kMassTol) {
    throw ValidationError("target atom masses must sum to 1 (got " +
                          std::to_string(total.value()) + ")");
  }
}

TargetDensity::TargetDensity(PiecewiseLinear f, double eta)
    : f_(std::move(f)), eta_(eta) {
  if (f_.lo() != 0.0) {
    throw ValidationError("density domain must start at exactly 0");
  }
  for (double y : f_.ys()) {
    if (y < 0.0) throw ValidationError("density values must be nonnegative");
  }
  const double total = f_.integral();
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("density must integrate to 1 (got " + std::to_string(total) + ")");
  }
  if (!(eta_ > 0.0) || eta_ > f_.hi()) {
    throw ValidationError("positivity radius must lie in ]0, domain end]");
  }
  // Strict positivity on ]0, eta]: a continuous piecewise-linear function is
  // positive on the interval iff it is positive at every node inside and at
  // the right endpoint (the value at 0 itself may vanish).
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double x = f_.xs()[i];
    if (x > 0.0 && x <= eta_ && !(f_.ys()[i] > 0.0)) {
      throw ValidationError("density must be strictly positive on ]0, eta]");
    }
  }
  if (!(f_(eta_) > 0.0)) {
    throw ValidationError("density must be strictly positive at eta");
  }
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> values,
                                           std::vector<double> masses)
    : values_(std::move(values)), masses_(std::move(masses)) {
  if (values_.empty() || values_.size() != masses_.size()) {
    throw ValidationError("discrete distribution needs matching nonempty value/mass lists");
  }
  NeumaierSum total;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || !std::isfinite(masses_[i])) {
      throw ValidationError("discrete distribution entries must be finite");
    }
    if (!(masses_[i] > 0.0)) {
      throw ValidationError("discrete distribution masses must be positive");
    }
    if (i > 0 && !(values_[i - 1] < values_[i])) {
      throw ValidationError("discrete distribution values must be strictly increasing");
    }
    total.add(masses_[i]);
  }
  if (std::abs(total.value() - 1.0) > kMassTol) {
    throw ValidationError("discrete distribution masses must sum to 1 (got " +
                          std::to_string(total.value()) + ")");
  }
  cum_.resize(values_.size() + 1);
  NeumaierSum acc;
  cum_[0] = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc.add(masses_[i]);
    cum_[i + 1] = acc.value();
  }
}

double DiscreteDistribution::cdf(double x) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return cum_[static_cast<std::size_t>(it - values_.begin())];
}

double DiscreteDistribution::cdf_left(double x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return cum_[static_cast<std::size_t>(it - values_.begin())];
}

double kolmogorov_distance(const Cdf& a, const Cdf& b, std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("empty grid");
  double worst = 0.0;
  for (double x : grid) {
    worst = std::max(worst, std::abs(a(x) - b(x)));
    worst = std::max(worst, std::abs(a.left(x) - b.left(x)));
  }
  return worst;
}

double ks_statistic(std::span<const double> sample, const Cdf& reference) {
  if (sample.empty()) throw ValidationError("empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Lower side against the left limit so reference atoms (tied draws) do
    // not register as discrepancy.
    worst = std::max(worst, reference.left(sorted[i]) - static_cast<double>(i) / n);
    worst = std::max(worst, static_cast<double>(i + 1) / n - reference(sorted[i]));
  }
  return worst;
}

namespace {

double tv_merged(std::span<const double> va, std::span<const double> ma,
                 std::span<const double> vb, std::span<const double> mb) {
  NeumaierSum acc;
  std::size_t i = 0, j = 0;
  while (i < va.size() || j < vb.size()) {
    if (i < va.size() && j < vb.size() && std::abs(va[i] - vb[j]) <= kAtomMergeTol) {
      acc.add(std::abs(ma[i] - mb[j]));
      ++i;
      ++j;
    } else if (j >= vb.size() || (i < va.size() && va[i] < vb[j])) {
      acc.add(ma[i]);
      ++i;
    } else {
      acc.add(mb[j]);
      ++j;
    }
  }
  return 0.5 * acc.value();
}

}  // namespace

double total_variation_atoms(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return tv_merged(a.values(), a.masses(), b.values(), b.masses());
}

double total_variation_atoms(const DiscreteDistribution& a, const FiniteTarget& b) {
  std::vector<double> vb, mb;
  vb.reserve(b.atoms().size());
  mb.reserve(b.atoms().size());
  for (const Atom& atom : b.atoms()) {
    vb.push_back(atom.distance);
    mb.push_back(atom.mass);
  }
  return tv_merged(a.values(), a.masses(), vb, mb);
}

}  // namespace feasidist
