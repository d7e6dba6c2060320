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

#include "feasidist/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

#include "feasidist/common.hpp"

namespace feasidist {

WeightSplit solve_weight_split(double s) {
  if (!(s > 0.0) || s > 1.0) {
    throw ValidationError("invalid squared-mass target");
  }
  // Smallest j with 1/j <= s; nudge against rounding of the division.
  auto j = static_cast<long>(std::ceil(1.0 / s));
  while (j > 2 && 1.0 / static_cast<double>(j - 1) <= s) --j;
  while (1.0 / static_cast<double>(j) > s) ++j;
  WeightSplit split;
  split.j = static_cast<int>(j);
  const double jd = static_cast<double>(j);
  if (1.0 / jd == s) {
    split.weights.assign(static_cast<std::size_t>(j), 1.0 / jd);
    return split;
  }
  const double disc = std::max(0.0, (jd * s - 1.0) / (jd - 1.0));
  const double a = (1.0 - std::sqrt(disc)) / jd;
  split.weights.assign(static_cast<std::size_t>(j - 1), a);
  split.weights.push_back(1.0 - (jd - 1.0) * a);
  return split;
}

TreeStructure::TreeStructure(std::vector<int> parent, std::vector<double> edge_length,
                             int root, std::vector<int> mass_nodes,
                             std::vector<double> masses)
    : parent_(std::move(parent)),
      edge_(std::move(edge_length)),
      root_(root),
      leaf_nodes_(std::move(mass_nodes)),
      leaf_mass_(std::move(masses)) {
  const std::size_t n = parent_.size();
  if (n == 0 || edge_.size() != n) {
    throw ValidationError("tree needs matching parent and edge-length lists");
  }
  if (root_ < 0 || static_cast<std::size_t>(root_) >= n || parent_[static_cast<std::size_t>(root_)] != -1) {
    throw ValidationError("tree root must be in range with parent -1");
  }
  nchildren_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const int p = parent_[v];
    if (static_cast<int>(v) == root_) continue;
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw ValidationError("tree parent index out of range");
    }
    if (!(edge_[v] > 0.0) || !std::isfinite(edge_[v])) {
      throw ValidationError("tree edge lengths must be positive");
    }
    nchildren_[static_cast<std::size_t>(p)] += 1;
  }
  // Depths by memoized walk to the root; a walk longer than n nodes means the
  // parent links contain a cycle.
  depth_.assign(n, -1.0);
  depth_[static_cast<std::size_t>(root_)] = 0.0;
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < n; ++v) {
    if (depth_[v] >= 0.0) continue;
    stack.clear();
    std::size_t cur = v;
    while (depth_[cur] < 0.0) {
      stack.push_back(cur);
      if (stack.size() > n) throw ValidationError("tree parent links contain a cycle");
      const int p = parent_[cur];
      if (p == -1) throw ValidationError("tree has a second root");
      cur = static_cast<std::size_t>(p);
    }
    double d = depth_[cur];
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      d += edge_[*it];
      depth_[*it] = d;
    }
  }
  if (leaf_nodes_.size() != leaf_mass_.size()) {
    throw ValidationError("tree leaf-measure lists must match");
  }
  NeumaierSum total;
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < leaf_nodes_.size(); ++i) {
    const int v = leaf_nodes_[i];
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw ValidationError("leaf-measure node out of range");
    }
    if (nchildren_[static_cast<std::size_t>(v)] != 0) {
      throw ValidationError("leaf measure must be supported on leaves only");
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw ValidationError("duplicate leaf-measure entry");
    }
    seen[static_cast<std::size_t>(v)] = 1;
    const double m = leaf_mass_[i];
    if (!(m > 0.0) || m > 1.0) {
      throw ValidationError("leaf masses must lie in ]0, 1]");
    }
    total.add(m);
  }
  if (leaf_nodes_.empty() || std::abs(total.value() - 1.0) > kMassTol) {
    throw ValidationError("leaf masses must sum to 1");
  }
}

namespace {

// Root-to-node path as node indices (root first).
std::vector<int> path_from_root(const TreeStructure& t, int node) {
  std::vector<int> path;
  int cur = node;
  while (cur != -1) {
    path.push_back(cur);
    cur = t.parent()[static_cast<std::size_t>(cur)];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double distance_by_paths(const TreeStructure& t, const std::vector<int>& pu,
                         const std::vector<int>& pv) {
  std::size_t i = 0;
  const std::size_t m = std::min(pu.size(), pv.size());
  while (i < m && pu[i] == pv[i]) ++i;
  // pu[i-1] is the last common ancestor.
  const int lca = pu[i - 1];
  return t.depth(pu.back()) + t.depth(pv.back()) - 2.0 * t.depth(lca);
}

}  // namespace

double TreeStructure::leaf_distance(int u, int v) const {
  if (!is_leaf(u) || !is_leaf(v)) {
    throw ValidationError("distance query requires leaf nodes");
  }
  if (u == v) return 0.0;
  const std::vector<int> pu = path_from_root(*this, u);
  const std::vector<int> pv = path_from_root(*this, v);
  return distance_by_paths(*this, pu, pv);
}

double projected_leaf_count(const FiniteTarget& target) {
  const auto& atoms = target.atoms();
  std::vector<double> prefix(atoms.size());
  NeumaierSum acc;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc.add(atoms[i].mass);
    prefix[i] = acc.value();
  }
  double projected = 1.0;
  for (std::size_t t = 1; t < atoms.size(); ++t) {
    const double s = prefix[t - 1] / prefix[t];
    projected *= static_cast<double>(solve_weight_split(s).j);
    if (!std::isfinite(projected)) break;
  }
  return projected;
}

TreeStructure build_finite(const FiniteTarget& target, const BuildCaps& caps) {
  const auto& atoms = target.atoms();
  const std::size_t k = target.k();

  const double projected = projected_leaf_count(target);
  if (!(projected <= static_cast<double>(caps.max_leaves))) {
    throw ConstructionError("construction too large: projected leaf count " +
                            std::to_string(projected) + " exceeds cap " +
                            std::to_string(caps.max_leaves));
  }

  std::vector<double> prefix(atoms.size());
  NeumaierSum acc;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc.add(atoms[i].mass);
    prefix[i] = acc.value();
  }

  // Iteratively wrap the current tree under a fresh root.  Node 0 stays the
  // root of each intermediate tree; copies are materialized with offsets.
  std::vector<int> parent{-1};
  std::vector<double> edge{0.0};
  std::vector<int> leaves{0};
  std::vector<double> masses{1.0};

  for (std::size_t t = 1; t <= k; ++t) {
    const double s = prefix[t - 1] / prefix[t];
    const WeightSplit split = solve_weight_split(s);
    const double len = 0.5 * (atoms[t].distance - atoms[t - 1].distance);
    const std::size_t old_n = parent.size();
    const auto j = static_cast<std::size_t>(split.j);

    std::vector<int> nparent(1 + j * old_n);
    std::vector<double> nedge(1 + j * old_n);
    std::vector<int> nleaves;
    std::vector<double> nmasses;
    nleaves.reserve(j * leaves.size());
    nmasses.reserve(j * leaves.size());
    nparent[0] = -1;
    nedge[0] = 0.0;
    for (std::size_t c = 0; c < j; ++c) {
      const std::size_t off = 1 + c * old_n;
      for (std::size_t v = 0; v < old_n; ++v) {
        if (parent[v] == -1) {
          nparent[off + v] = 0;
          nedge[off + v] = len;
        } else {
          nparent[off + v] = static_cast<int>(off) + parent[v];
          nedge[off + v] = edge[v];
        }
      }
      const double w = split.weights[c];
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        nleaves.push_back(static_cast<int>(off) + leaves[i]);
        nmasses.push_back(w * masses[i]);
      }
    }
    parent = std::move(nparent);
    edge = std::move(nedge);
    leaves = std::move(nleaves);
    masses = std::move(nmasses);
  }

  return TreeStructure(std::move(parent), std::move(edge), 0, std::move(leaves),
                       std::move(masses));
}

DiscreteDistribution exact_two_point(const TreeStructure& t, const BuildCaps& caps) {
  const std::size_t L = t.mass_nodes().size();
  const double pairs = static_cast<double>(L) * static_cast<double>(L);
  if (!(pairs <= static_cast<double>(caps.max_pairs))) {
    throw ConstructionError(
        "pair enumeration too large: " + std::to_string(L) + "^2 ordered pairs exceed cap " +
        std::to_string(caps.max_pairs) + "; use analytic_two_point instead");
  }

  std::vector<std::vector<int>> paths(L);
  for (std::size_t i = 0; i < L; ++i) {
    paths[i] = path_from_root(t, t.mass_nodes()[i]);
  }

  // Accumulate ordered-pair mass keyed by the exact distance value; identical
  // level sums produce bitwise-equal doubles across copies, the later 1e-12
  // merge only guards residual rounding.
  std::unordered_map<double, NeumaierSum> buckets;
  NeumaierSum diag;
  for (std::size_t i = 0; i < L; ++i) {
    diag.add(t.masses()[i] * t.masses()[i]);
  }
  buckets[0.0].add(diag.value());
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      const double d = distance_by_paths(t, paths[i], paths[j]);
      buckets[d].add(2.0 * t.masses()[i] * t.masses()[j]);
    }
  }

  std::vector<std::pair<double, double>> entries;
  entries.reserve(buckets.size());
  for (const auto& [d, m] : buckets) {
    const double mass = m.value();
    if (mass > 0.0) entries.emplace_back(d, mass);
  }
  std::sort(entries.begin(), entries.end());

  std::vector<double> values;
  std::vector<double> masses;
  for (const auto& [d, mass] : entries) {
    if (!values.empty() && d - values.back() <= kAtomMergeTol) {
      masses.back() += mass;
    } else {
      values.push_back(d);
      masses.push_back(mass);
    }
  }
  return DiscreteDistribution(std::move(values), std::move(masses));
}

DiscreteDistribution analytic_two_point(const FiniteTarget& target) {
  const auto& atoms = target.atoms();
  std::vector<double> prefix(atoms.size());
  NeumaierSum acc;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc.add(atoms[i].mass);
    prefix[i] = acc.value();
  }
  // Unroll the recursion from the largest atom down; the extended-precision
  // running product keeps the telescoping arithmetic honest for huge k.
  std::vector<double> masses(atoms.size());
  long double running = 1.0L;
  for (std::size_t t = atoms.size() - 1; t >= 1; --t) {
    const long double s = static_cast<long double>(prefix[t - 1]) /
                          static_cast<long double>(prefix[t]);
    masses[t] = static_cast<double>(running * (1.0L - s));
    running *= s;
  }
  masses[0] = static_cast<double>(running);
  std::vector<double> values(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) values[i] = atoms[i].distance;
  return DiscreteDistribution(std::move(values), std::move(masses));
}

namespace {

// Shared leaf-sampling state: prefix masses plus root paths built once.
class LeafSampler {
 public:
  explicit LeafSampler(const TreeStructure& t) : t_(&t) {
    const auto& masses = t.masses();
    cum_.resize(masses.size());
    NeumaierSum acc;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      acc.add(masses[i]);
      cum_[i] = acc.value();
    }
    cum_.back() = 1.0;
    paths_.resize(masses.size());
  }

  std::size_t draw(Rng& rng) {
    const double u = rng.uniform01();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    if (i >= cum_.size()) i = cum_.size() - 1;
    return i;
  }

  double distance(std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    return distance_by_paths(*t_, path(i), path(j));
  }

 private:
  const std::vector<int>& path(std::size_t i) {
    if (paths_[i].empty()) paths_[i] = path_from_root(*t_, t_->mass_nodes()[i]);
    return paths_[i];
  }

  const TreeStructure* t_;
  std::vector<double> cum_;
  std::vector<std::vector<int>> paths_;
};

}  // namespace

EmpiricalSample sample_two_point(const TreeStructure& t, std::size_t n, SamplerState state) {
  LeafSampler leaves(t);
  Rng rng(state);
  EmpiricalSample out;
  out.state = state;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = leaves.draw(rng);
    const std::size_t v = leaves.draw(rng);
    out.values[i] = leaves.distance(u, v);
  }
  return out;
}

std::vector<std::vector<double>> sample_npoint_matrix(const TreeStructure& t,
                                                      std::size_t n, SamplerState state) {
  if (n < 2) throw ValidationError("n-point matrix needs n >= 2");
  LeafSampler leaves(t);
  Rng rng(state);
  std::vector<std::size_t> picks(n);
  for (std::size_t i = 0; i < n; ++i) picks[i] = leaves.draw(rng);
  std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = leaves.distance(picks[i], picks[j]);
      mat[i][j] = d;
      mat[j][i] = d;
    }
  }
  return mat;
}

}  // namespace feasidist
