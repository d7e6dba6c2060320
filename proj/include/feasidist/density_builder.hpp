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

#ifndef FEASIDIST_DENSITY_BUILDER_HPP
#define FEASIDIST_DENSITY_BUILDER_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "feasidist/distributions.hpp"
#include "feasidist/dyadic.hpp"
#include "feasidist/rng.hpp"
#include "feasidist/tree.hpp"

namespace feasidist {

// Margin beta and subdivision order n controlling the accuracy constant
//   C(beta, n) = 1/((1-3beta)(1-beta)) * n^2/(n^2-4n+1) * (1+3/n).
struct MarginParams {
  double beta = 0.0;
  std::size_t n = 0;
  double accuracy_constant = 0.0;
};

double accuracy_constant(double beta, std::size_t n);

// beta = min(1/6, zeta/24) and the smallest n >= 4 with C(beta, n) <= 1+zeta.
MarginParams choose_margin_params(double zeta);

// Arithmetic run of cluster centers: first, first + eps, ... (count entries).
struct CenterRun {
  double first = 0.0;
  std::size_t count = 0;
};

// Everything the explicit construction derives from a target density:
// truncation quantiles, the core where the density is materially positive,
// the center spacing, the zero-distance mass, and the common scale.
struct BuildParams {
  double beta = 0.0;
  std::size_t n = 0;
  double left_cut = 0.0;   // mass <= beta/2 below it
  double right_cut = 0.0;  // mass <= beta/2 beyond it
  std::vector<std::pair<double, double>> core;  // f >= beta/right_cut on it
  double eps = 0.0;  // center spacing; f varies <= beta^2/right_cut across it
  double p0 = 0.0;   // mass at distance zero
  double alpha = 0.0;  // common scale: cluster i carries alpha*eps*f(d_i)
  std::vector<CenterRun> centers;  // spacing eps, one run per core interval
  std::size_t atoms_per_cluster = 0;  // n^2 - 4n + 1

  std::size_t center_count() const;
  double center(std::size_t i) const;  // i-th center across runs
  double graft_scale() const;          // eps / n
};

BuildParams derive_params(const TargetDensity& f, double beta, std::size_t n);

// The discrete intermediate target: mass p0 at zero plus, for each center d,
// a cluster of atoms_per_cluster equal atoms at d + j*eps/n^2 with total mass
// alpha*eps*f(d).  Kept in structured form; atom counts can reach 1e9.
class DiscretizedTarget {
 public:
  DiscretizedTarget(const TargetDensity& f, BuildParams params);

  const BuildParams& params() const { return params_; }
  double mass_at_zero() const { return params_.p0; }
  std::size_t cluster_count() const { return cluster_mass_.size(); }
  double center(std::size_t i) const { return params_.center(i); }
  double cluster_mass(std::size_t i) const { return cluster_mass_[i]; }
  // Ascending prefix sums of cluster masses (excluding the zero atom).
  const std::vector<double>& cluster_prefix() const { return cluster_prefix_; }
  double total_mass() const;        // p0 + all cluster masses
  double atom_count() const;        // clusters * atoms_per_cluster, as double
  double atom_spacing() const;      // eps / n^2, within a cluster
  double largest_distance() const;  // last atom location

  // Explicit atom list including the zero atom; throws ConstructionError
  // when 1 + cluster_count*atoms_per_cluster exceeds max_atoms.
  FiniteTarget flatten(std::size_t max_atoms) const;

 private:
  BuildParams params_;
  std::vector<double> cluster_mass_;
  std::vector<double> cluster_prefix_;
};

// Result of replaying the splitting plan over every atom of the discrete
// target in one descending stream: the plan's realized per-atom masses are
// compared with the intended ones without materializing the tree.
struct PlanCheck {
  double total_variation = 0.0;  // realized vs intended, zero atom included
  double zero_mass_gap = 0.0;    // |plan residual at zero - p0|
  double max_split_share = 0.0;  // largest squared-mass ratio seen (< 1)
  double atoms = 0.0;
  double log2_projected_leaves = 0.0;  // -log2(p0), a lower bound
};

// Domination certificate for the built density against the target.
struct CertifyReport {
  double bound = 0.0;
  double max_ratio = 0.0;  // sup of built/target over the checked set
  double argmax = 0.0;
  std::size_t support_violations = 0;  // target zero but built positive
  std::size_t points_checked = 0;
  bool pass = false;
  std::vector<std::pair<double, double>> worst;  // (x, ratio), best-first
};

// Explicit measured space whose pair-distance law has a closed-form density:
// a splitting-plan tree over the discrete target with a scaled spherically
// symmetric tree grafted at every leaf.  The tree is kept symbolic; all
// observables come from closed forms or the two-stage sampler.
class CompositeSpace {
 public:
  CompositeSpace(const TargetDensity& f, double zeta);
  // Trusted-parameter variant (tests fabricate params with this).
  CompositeSpace(const TargetDensity& f, double zeta, BuildParams params);

  const TargetDensity& target() const { return target_; }
  double zeta() const { return zeta_; }
  const BuildParams& params() const { return skeleton_.params(); }
  const DiscretizedTarget& skeleton() const { return skeleton_; }
  const DyadicModel& graft() const { return graft_; }
  double graft_scale() const { return skeleton_.params().graft_scale(); }

  double density(double x) const;
  double cdf(double x) const;
  // Exact accounting of the density integral: p0 plus the cluster masses.
  double density_integral() const;

  double sample_pair(Rng& rng) const;
  // Deterministic for any thread count: fixed-size chunks, one stream per
  // chunk, concatenated in chunk order.
  std::vector<double> sample_pairs(std::size_t count, SamplerState state,
                                   unsigned threads) const;

  // Materializes the splitting-plan tree over the flattened discrete target
  // (small cases only; throws ConstructionError past the caps).
  TreeStructure materialize_skeleton(const BuildCaps& caps) const;

  PlanCheck verify_plan() const;

  // Exhaustive certificate: every kink of the built density and of the
  // target, plus points_per_piece uniform points per target piece.
  CertifyReport certify(double bound, std::size_t points_per_piece) const;
  // Same supremum computed with per-cluster pruning; used where the
  // exhaustive scan is too wide (deep decomposition levels).
  CertifyReport certify_pruned(double bound) const;

 private:
  TargetDensity target_;
  double zeta_ = 0.0;
  DiscretizedTarget skeleton_;
  DyadicModel graft_;
};

// Sum of shifted triangle kernels sum_{j in [0, n^2-4n]} phi(y - j/n - 2)
// for y in [0, n]; bounded by n*(1+3/n).
double cluster_kernel_sum(std::size_t n, double y);
// Its running integral sum_j Phi(y - j/n - 2) (each kernel counts up to 1).
double cluster_kernel_sum_cdf(std::size_t n, double y);

}  // namespace feasidist

#endif  // FEASIDIST_DENSITY_BUILDER_HPP
