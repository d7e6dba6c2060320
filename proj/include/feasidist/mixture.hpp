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

#ifndef FEASIDIST_MIXTURE_HPP
#define FEASIDIST_MIXTURE_HPP

#include <cstddef>
#include <vector>

#include "feasidist/density_builder.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/piecewise_linear.hpp"
#include "feasidist/rng.hpp"

namespace feasidist {

// One halving level: a certified composite construction for the incoming
// residual density, together with the piecewise-linear proxy law actually
// subtracted in the residual recursion.
//
// The proxy is forced by arithmetic, not convenience: subtracting the
// composite's exact pair density would push the next residual's modulus of
// continuity through the cluster-kernel oscillation (slope ~ 1/graft_scale),
// collapsing the next level's spacing by ~5 orders of magnitude per level.
// The proxy matches the incoming density exactly near zero and alpha times
// it across the covered core, keeps unit mass exactly, and stays within the
// same 3/2 bound the certificate establishes for the composite; its distance
// to the composite's law is measured and reported, never hidden.
struct MixtureLevel {
  double weight = 0.0;       // 2^{-k}
  BuildParams params;        // composite construction for this level's input
  CertifyReport certificate; // pruned domination certificate, bound 3/2
  TargetDensity input;       // residual the level was built from
  PiecewiseLinear proxy;     // subtracted law; unit mass, <= 3/2 * input
  double proxy_ratio_sup = 0.0;  // exact sup proxy/input over breakpoints
  double proxy_gap = 0.0;    // sup |composite cdf - proxy cdf| on a probe grid
  double drift = 0.0;        // |integral(2*input - proxy) - 1| pre-rescale
};

// Finite halving decomposition of a target density: level k carries weight
// 2^{-k}, plus an explicit residual with weight 2^{-N}.  Weights sum to one
// exactly.  Composite spaces are rebuilt on demand from stored parameters;
// levels only hold piecewise-linear data and reports.
class MixtureSpace {
 public:
  MixtureSpace(TargetDensity original, std::vector<MixtureLevel> levels,
               TargetDensity residual);

  const TargetDensity& original() const { return original_; }
  const std::vector<MixtureLevel>& levels() const { return levels_; }
  std::size_t level_count() const { return levels_.size(); }
  const TargetDensity& residual() const { return residual_; }
  double residual_weight() const;  // 2^{-N}

  // The level's composite space, reconstructed from its stored parameters.
  CompositeSpace component_space(std::size_t level) const;

  // Largest |original - sum of weighted proxies - weighted residual| over
  // the grid points.
  double reconstruction_gap(const std::vector<double>& grid) const;

  // Draw count pair distances: pick level k with probability 2^{-k} (the
  // residual with probability 2^{-N}), then inverse-CDF sample the level's
  // proxy law (the residual's density for the residual component).
  // Deterministic for any thread count (fixed chunks, one stream each).
  EmpiricalSample annealed_sample(std::size_t count, SamplerState state,
                                  unsigned threads = 1) const;

  // Component choices alone, replayed with the same streams as
  // annealed_sample: entry k counts level k+1, last entry the residual.
  std::vector<std::size_t> component_histogram(std::size_t count,
                                               SamplerState state) const;

 private:
  TargetDensity original_;
  std::vector<MixtureLevel> levels_;
  TargetDensity residual_;
};

// Runs the halving recursion: for each level, derive and certify a composite
// construction for the current residual at accuracy 1/2 (so the built
// density stays below 3/2 of it), subtract the level's proxy law, rescale
// the float drift away (logged per level), and continue on the remainder.
// Nonnegativity of every residual follows from the 3/2 bound.
MixtureSpace decompose(const TargetDensity& f, std::size_t levels);

}  // namespace feasidist

#endif  // FEASIDIST_MIXTURE_HPP
