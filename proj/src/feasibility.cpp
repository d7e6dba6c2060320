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

#include "feasidist/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "feasidist/common.hpp"

namespace feasidist {
namespace {

// True when the density is identically zero on some [0, delta], delta > 0
// (or there is no density at all).  Exact piecewise-linear question: the
// support stays away from zero iff the domain starts right of zero or the
// first two node values both vanish.
bool density_vanishes_near_zero(const std::optional<PiecewiseLinear>& density) {
  if (!density.has_value()) return true;
  if (density->lo() > 0.0) return true;
  const std::vector<double>& ys = density->ys();
  return ys[0] == 0.0 && ys[1] == 0.0;
}

// True when the density is strictly positive on some ]0, eta], eta > 0.
bool density_positive_near_zero(const std::optional<PiecewiseLinear>& density) {
  if (!density.has_value()) return false;
  if (density->lo() != 0.0) return false;
  const std::vector<double>& ys = density->ys();
  return ys[0] > 0.0 || ys[1] > 0.0;
}

}  // namespace

TargetSpec::TargetSpec(std::vector<double> atom_locations,
                       std::vector<double> atom_masses,
                       std::optional<PiecewiseLinear> continuous)
    : atom_locations_(std::move(atom_locations)),
      atom_masses_(std::move(atom_masses)),
      continuous_(std::move(continuous)) {
  if (atom_locations_.size() != atom_masses_.size()) {
    throw ValidationError("atom locations and masses must align");
  }
  NeumaierSum total;
  for (std::size_t i = 0; i < atom_locations_.size(); ++i) {
    const double x = atom_locations_[i];
    const double m = atom_masses_[i];
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("atom locations must be finite and nonnegative");
    }
    if (i > 0 && !(atom_locations_[i - 1] < x)) {
      throw ValidationError("atom locations must be strictly increasing");
    }
    if (!std::isfinite(m) || !(m > 0.0)) {
      throw ValidationError("atom masses must be positive");
    }
    total.add(m);
  }
  if (continuous_.has_value()) {
    if (continuous_->lo() < 0.0) {
      throw ValidationError("density domain must lie in [0, inf[");
    }
    for (double y : continuous_->ys()) {
      if (y < 0.0) {
        throw ValidationError("density values must be nonnegative");
      }
    }
    total.add(continuous_->integral());
  }
  if (std::abs(total.value() - 1.0) > kMassTol) {
    throw ValidationError("total mass must be 1 (got " +
                          std::to_string(total.value()) + ")");
  }
}

std::string to_string(FeasibilityVerdict verdict) {
  switch (verdict) {
    case FeasibilityVerdict::kInfeasibleNoZeroSupport:
      return "infeasible-no-zero-support";
    case FeasibilityVerdict::kInfeasibleProp3:
      return "infeasible-prop3";
    case FeasibilityVerdict::kFeasibleByThm1:
      return "feasible-by-thm1";
    case FeasibilityVerdict::kFeasibleByCor1:
      return "feasible-by-cor1";
    case FeasibilityVerdict::kUnknown:
      return "unknown";
  }
  return "unknown";
}

FeasibilityVerdict classify(const TargetSpec& spec) {
  const std::vector<double>& locs = spec.atom_locations();
  const std::vector<double>& masses = spec.atom_masses();
  const bool atom_at_zero = !locs.empty() && locs.front() == 0.0;
  const bool vanishes = density_vanishes_near_zero(spec.continuous());

  // (a) Zero outside the support: infeasible outright.
  if (!atom_at_zero && vanishes) {
    return FeasibilityVerdict::kInfeasibleNoZeroSupport;
  }
  // (b) An isolated atom at zero next to mass bounded away from zero.
  if (atom_at_zero && locs.size() == 1 && masses.front() < 1.0 && vanishes) {
    return FeasibilityVerdict::kInfeasibleProp3;
  }
  // (c) Finite atomic law with an atom at zero: directly constructible.
  const bool purely_atomic =
      !spec.continuous().has_value() || spec.continuous()->integral() == 0.0;
  if (purely_atomic && atom_at_zero &&
      std::all_of(masses.begin(), masses.end(),
                  [](double m) { return m > 0.0; })) {
    return FeasibilityVerdict::kFeasibleByThm1;
  }
  // (d) Purely continuous, positive just right of zero.
  if (locs.empty() && density_positive_near_zero(spec.continuous())) {
    return FeasibilityVerdict::kFeasibleByCor1;
  }
  return FeasibilityVerdict::kUnknown;
}

namespace {

// Root-to-node index paths for every vertex, for exact pairwise distances
// between arbitrary vertices (not only leaves).
std::vector<std::vector<int>> root_paths(const TreeStructure& t) {
  std::vector<std::vector<int>> paths(t.node_count());
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    std::vector<int> path;
    for (int u = static_cast<int>(v); u >= 0; u = t.parent()[static_cast<std::size_t>(u)]) {
      path.push_back(u);
      if (u == t.root()) break;
    }
    std::reverse(path.begin(), path.end());
    paths[v] = std::move(path);
  }
  return paths;
}

double vertex_distance(const TreeStructure& t,
                       const std::vector<int>& path_u,
                       const std::vector<int>& path_v) {
  std::size_t i = 0;
  const std::size_t common = std::min(path_u.size(), path_v.size());
  while (i < common && path_u[i] == path_v[i]) ++i;
  const int lca = path_u[i - 1];
  return t.depth(path_u.back()) + t.depth(path_v.back()) - 2.0 * t.depth(lca);
}

std::vector<CoveringReport> covering_reports(
    const TreeStructure& t, const DiscreteDistribution& law,
    const std::vector<double>& eps_values) {
  const std::size_t count = t.node_count();
  const std::vector<std::vector<int>> paths = root_paths(t);

  // Vertex masses; vertices off the support weigh zero and are picked last.
  std::vector<double> vertex_mass(count, 0.0);
  for (std::size_t i = 0; i < t.mass_nodes().size(); ++i) {
    vertex_mass[static_cast<std::size_t>(t.mass_nodes()[i])] += t.masses()[i];
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return vertex_mass[a] > vertex_mass[b];
                   });

  std::vector<CoveringReport> reports;
  reports.reserve(eps_values.size());
  std::vector<char> covered(count);
  for (double eps : eps_values) {
    if (!(eps > 0.0)) {
      throw ValidationError("eps must be positive");
    }
    const double radius = eps / 2.0;
    std::fill(covered.begin(), covered.end(), 0);
    std::size_t centers = 0;
    for (std::size_t idx : order) {
      if (covered[idx]) continue;
      ++centers;
      for (std::size_t v = 0; v < count; ++v) {
        if (!covered[v] && vertex_distance(t, paths[idx], paths[v]) <= radius) {
          covered[v] = 1;
        }
      }
    }
    CoveringReport report;
    report.eps = eps;
    report.m_greedy = centers;
    report.p_le_eps = law.cdf(eps);
    report.verdict = report.p_le_eps >= 1.0 / static_cast<double>(centers);
    reports.push_back(report);
  }
  return reports;
}

}  // namespace

CoveringReport covering_bound_check(const TreeStructure& t, double eps) {
  return covering_reports(t, exact_two_point(t), {eps}).front();
}

std::vector<CoveringReport> covering_sweep(
    const TreeStructure& t, const std::vector<double>& eps_values) {
  return covering_reports(t, exact_two_point(t), eps_values);
}

}  // namespace feasidist
