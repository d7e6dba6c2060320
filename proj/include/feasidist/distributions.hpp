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

#ifndef FEASIDIST_DISTRIBUTIONS_HPP
#define FEASIDIST_DISTRIBUTIONS_HPP

#include <span>
#include <vector>

#include "feasidist/piecewise_linear.hpp"
#include "feasidist/rng.hpp"

namespace feasidist {

// One atom of a purely atomic distribution on the nonnegative reals.
struct Atom {
  double distance = 0.0;
  double mass = 0.0;
};

// Purely atomic distribution with an atom at 0: the input to the finite tree
// construction.  Invariants: first atom at distance exactly 0, distances
// strictly increasing, masses positive and summing to 1 within 1e-12.
class FiniteTarget {
 public:
  explicit FiniteTarget(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  // Number of nonzero distances (k in the inductive construction).
  std::size_t k() const { return atoms_.size() - 1; }
  double mass_at_zero() const { return atoms_.front().mass; }
  double largest_distance() const { return atoms_.back().distance; }

 private:
  std::vector<Atom> atoms_;
};

// Piecewise-linear probability density on [0, L] together with its positivity
// radius eta: the density is strictly positive on ]0, eta].  Integral must be
// 1 within 1e-9 (trapezoid integration is exact for this class).
class TargetDensity {
 public:
  TargetDensity(PiecewiseLinear f, double eta);

  const PiecewiseLinear& f() const { return f_; }
  double eta() const { return eta_; }
  double operator()(double x) const { return f_(x); }

 private:
  PiecewiseLinear f_;
  double eta_;
};

// Generic atomic distribution (output of exact enumeration).  Values strictly
// increasing, masses positive, total mass 1 within 1e-12.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> values, std::vector<double> masses);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& masses() const { return masses_; }
  // Right-continuous CDF and its left limit.
  double cdf(double x) const;
  double cdf_left(double x) const;

 private:
  std::vector<double> values_;
  std::vector<double> masses_;
  std::vector<double> cum_;  // cum_[i] = mass of the first i atoms
};

// Monte Carlo draw set together with the stream that produced it.
struct EmpiricalSample {
  std::vector<double> values;
  SamplerState state;
};

// Right-continuous CDF interface; `left` is the left limit F(x-).
class Cdf {
 public:
  virtual ~Cdf() = default;
  virtual double operator()(double x) const = 0;
  virtual double left(double x) const { return (*this)(x); }
};

// CDF view of a DiscreteDistribution.
class StepCdf : public Cdf {
 public:
  explicit StepCdf(const DiscreteDistribution& d) : d_(&d) {}
  double operator()(double x) const override { return d_->cdf(x); }
  double left(double x) const override { return d_->cdf_left(x); }

 private:
  const DiscreteDistribution* d_;
};

// CDF of a piecewise-linear density (continuous, so left == right).
class DensityCdf : public Cdf {
 public:
  explicit DensityCdf(const PiecewiseLinear& f) : f_(&f), total_(f.integral()) {}
  double operator()(double x) const override {
    const double v = f_->integral_to(x) / total_;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }

 private:
  const PiecewiseLinear* f_;
  double total_;
};

// Sup distance between two CDFs over an explicit grid, comparing both the
// right-continuous values and the left limits at every grid point.
double kolmogorov_distance(const Cdf& a, const Cdf& b, std::span<const double> grid);

// One-sample Kolmogorov-Smirnov statistic of a draw set against a CDF.
double ks_statistic(std::span<const double> sample, const Cdf& reference);

// Total variation distance between two atomic distributions: half the sum of
// absolute mass differences over the union of atom locations, with locations
// closer than 1e-12 identified.
double total_variation_atoms(const DiscreteDistribution& a, const DiscreteDistribution& b);
double total_variation_atoms(const DiscreteDistribution& a, const FiniteTarget& b);

}  // namespace feasidist

#endif  // FEASIDIST_DISTRIBUTIONS_HPP
