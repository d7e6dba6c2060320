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

#ifndef FEASIDIST_TREE_HPP
#define FEASIDIST_TREE_HPP

#include <cstdint>
#include <vector>

#include "feasidist/distributions.hpp"
#include "feasidist/rng.hpp"

namespace feasidist {

// Splitting of unit mass into j weights with a prescribed sum of squares.
struct WeightSplit {
  int j = 0;
  std::vector<double> weights;
};

// Returns the minimal-j split with sum(m_i) = 1 and sum(m_i^2) = s: equal
// weights when 1/j == s, otherwise the two-value scheme whose repeated value
// is the smaller root of (j-1)j a^2 - 2(j-1)a + (1-s) = 0.
WeightSplit solve_weight_split(double s);

// Size caps for materialized constructions.
struct BuildCaps {
  std::uint64_t max_leaves = 1000000;
  std::uint64_t max_pairs = 100000000;
};

// Finite rooted tree with positive edge lengths and a probability measure on
// its leaves.  Immutable after construction; depths are precomputed.
class TreeStructure {
 public:
  TreeStructure(std::vector<int> parent, std::vector<double> edge_length, int root,
                std::vector<int> mass_nodes, std::vector<double> masses);

  const std::vector<int>& parent() const { return parent_; }
  const std::vector<double>& edge_length() const { return edge_; }
  int root() const { return root_; }
  std::size_t node_count() const { return parent_.size(); }
  // Nodes carrying leaf mass, with aligned masses.
  const std::vector<int>& mass_nodes() const { return leaf_nodes_; }
  const std::vector<double>& masses() const { return leaf_mass_; }
  double depth(int node) const { return depth_[static_cast<std::size_t>(node)]; }
  bool is_leaf(int node) const { return nchildren_[static_cast<std::size_t>(node)] == 0; }

  // Tree metric between two leaves: depth(u) + depth(v) - 2 depth(lca).
  double leaf_distance(int u, int v) const;

 private:
  std::vector<int> parent_;
  std::vector<double> edge_;
  int root_;
  std::vector<int> leaf_nodes_;
  std::vector<double> leaf_mass_;
  std::vector<double> depth_;
  std::vector<int> nchildren_;
};

// Projected leaf count of the inductive construction (product of the level
// branching counts), as a double so oversize requests stay representable.
double projected_leaf_count(const FiniteTarget& target);

// Inductive construction achieving the target: strip the largest atom, build
// the smaller tree, then hang j rescaled copies under fresh edges of length
// (d_t - d_{t-1})/2.  Every leaf ends at depth d_k / 2.
TreeStructure build_finite(const FiniteTarget& target, const BuildCaps& caps = {});

// Exact two-point distance distribution by enumeration of all leaf pairs;
// atom locations within 1e-12 are merged.  The brute-force oracle.
DiscreteDistribution exact_two_point(const TreeStructure& t, const BuildCaps& caps = {});

// Two-point law of the construction evaluated through the recursion without
// materializing any tree; cross-checks exact_two_point and scales to targets
// whose tree would be astronomically large.
DiscreteDistribution analytic_two_point(const FiniteTarget& target);

// n i.i.d. draws of the distance between two independent nu-distributed leaves.
EmpiricalSample sample_two_point(const TreeStructure& t, std::size_t n, SamplerState state);

// Distance matrix of n i.i.d. nu-distributed leaves (zero diagonal, symmetric).
std::vector<std::vector<double>> sample_npoint_matrix(const TreeStructure& t,
                                                      std::size_t n, SamplerState state);

}  // namespace feasidist

#endif  // FEASIDIST_TREE_HPP
