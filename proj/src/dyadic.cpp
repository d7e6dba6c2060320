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

#include "feasidist/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "feasidist/common.hpp"

namespace feasidist {
namespace {

// Hard stop for level precomputation; the tail at least halves per level, so
// it underflows to exact zero well before this.
constexpr std::size_t kMaxLevels = 1200;

// Ceiling with a one-sided rounding guard: values within a few ulps above an
// integer (an artifact of evaluating the selection rule in floating point)
// snap down to it instead of jumping a whole unit.
double guarded_ceil(double v) { return std::ceil(v * (1.0 - 4e-15)); }

// Mixture weights of the three pair-distance kernels at one splitting level:
// both descent steps odd, exactly one even, both even.  They sum to one.
struct KernelCoefficients {
  double both_odd;
  double one_even;
  double both_even;
};

KernelCoefficients kernel_coefficients(double kappa) {
  if (kappa > 1e15) {
    // Limit for huge branching counts; the exact formulas below would lose
    // all precision (and overflow for kappa near the double maximum).
    return {0.25, 0.5, 0.25};
  }
  const double denom = 2.0 * (2.0 * kappa - 1.0);
  const double off = (kappa - 1.0) / denom;
  return {off, 1.0 - 2.0 * off, off};
}

// Splitting level whose pair-distance support [2^(1-n), 2^(2-n)) contains x.
// Returns false for x outside ]0, 4).
bool level_of(double x, std::size_t& level) {
  if (!(x > 0.0) || x >= 4.0) return false;
  int exponent = 0;
  std::frexp(x, &exponent);  // x in [2^(e-1), 2^e)
  const int n = 2 - exponent;
  if (n < 0) return false;
  level = static_cast<std::size_t>(n);
  return true;
}

}  // namespace

double triangle_kernel(double x) {
  if (x <= 0.0 || x >= 2.0) return 0.0;
  return x <= 1.0 ? x : 2.0 - x;
}

double triangle_kernel_cdf(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 2.0) return 1.0;
  if (t <= 1.0) return 0.5 * t * t;
  const double r = 2.0 - t;
  return 1.0 - 0.5 * r * r;
}

CdfEnvelope::CdfEnvelope(std::vector<double> xs, std::vector<double> values,
                         Mode mode)
    : xs_(std::move(xs)), values_(std::move(values)), mode_(mode) {
  if (xs_.size() < 2 || xs_.size() != values_.size()) {
    throw ValidationError("envelope needs at least two nodes");
  }
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || xs_[i] <= 0.0) {
      throw ValidationError("envelope nodes must be positive and finite");
    }
    if (i > 0 && xs_[i] <= xs_[i - 1]) {
      throw ValidationError("envelope nodes must be strictly increasing");
    }
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0 || values_[i] > 1.0) {
      throw ValidationError("envelope values must lie in ]0, 1]");
    }
    if (i > 0 && values_[i] < values_[i - 1]) {
      throw ValidationError("envelope values must be non-decreasing");
    }
  }
}

double CdfEnvelope::value(double x) const {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ValidationError("envelope queried outside ]0, inf[");
  }
  if (x >= xs_.back()) return values_.back();
  if (mode_ == Mode::kLinear) {
    if (x <= xs_.front()) return values_.front();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
  }
  // Log-log interpolation; below the first node, continue the first segment,
  // so tabulating two points of a power law represents it on all of ]0, x1].
  std::size_t i = 1;
  if (x > xs_.front()) {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    i = static_cast<std::size_t>(it - xs_.begin());
  }
  const double lx0 = std::log(xs_[i - 1]);
  const double lx1 = std::log(xs_[i]);
  const double lf0 = std::log(values_[i - 1]);
  const double lf1 = std::log(values_[i]);
  const double slope = (lf1 - lf0) / (lx1 - lx0);
  return std::exp(lf0 + slope * (std::log(x) - lx0));
}

KappaSequence branching_from_list(std::vector<double> kappas) {
  if (kappas.empty()) {
    throw ValidationError("branching list must be nonempty");
  }
  for (double k : kappas) {
    if (!std::isfinite(k) || k < 1.0 || k != std::floor(k)) {
      throw ValidationError("branching counts must be integers >= 1");
    }
  }
  KappaSequence seq;
  seq.origin = KappaSequence::Origin::kExplicitList;
  seq.rule = [kappas = std::move(kappas)](std::size_t n) {
    return n < kappas.size() ? kappas[n] : kappas.back();
  };
  return seq;
}

KappaSequence branching_from_envelope(CdfEnvelope envelope) {
  KappaSequence seq;
  seq.origin = KappaSequence::Origin::kEnvelopeRule;
  seq.rule = [env = std::move(envelope)](std::size_t n) {
    // Evaluation point 4 * 2^-(n+2) = 2^-n: the left end of the pair-distance
    // support two levels deeper, which is what the bound telescopes against.
    const double x = std::ldexp(1.0, -static_cast<int>(n));
    const double f = env.value(x);
    if (!(f > 0.0)) {
      throw ValidationError("envelope evaluates to zero");
    }
    return std::max(1.0, guarded_ceil(1.0 / f));
  };
  return seq;
}

KappaSequence branching_from_density(const TargetDensity& f) {
  if (f.eta() < 1.0) {
    throw ValidationError("positivity radius too small");
  }
  KappaSequence seq;
  seq.origin = KappaSequence::Origin::kDensityRule;
  const double eta = f.eta();
  seq.rule = [pl = f.f(), eta](std::size_t n) {
    const double x = std::ldexp(1.0, -static_cast<int>(n));
    const double g = pl.min_on(x * x, eta);
    if (!(g > 0.0)) {
      throw ValidationError("density not positive near zero");
    }
    const double demand = std::ldexp(1.0, static_cast<int>(n) + 1) / g;
    return std::max(1.0, guarded_ceil(demand));
  };
  return seq;
}

DyadicModel::DyadicModel(const KappaSequence& kappas)
    : origin_(kappas.origin) {
  if (!kappas.rule) {
    throw ValidationError("branching sequence has no rule");
  }
  tail_.push_back(1.0);
  while (tail_.back() > 0.0 && kappa_.size() < kMaxLevels) {
    const double k = kappas.rule(kappa_.size());
    if (std::isnan(k) || k < 1.0) {
      throw ValidationError("branching rule produced an invalid count");
    }
    kappa_.push_back(k);
    tail_.push_back(tail_.back() / (2.0 * k));
  }
  // Drop levels whose tail already vanished; they carry no mass.
  while (!kappa_.empty() && tail_[kappa_.size() - 1] == 0.0) {
    kappa_.pop_back();
    tail_.pop_back();
  }
}

double DyadicModel::kappa(std::size_t n) const {
  if (n >= kappa_.size()) {
    throw ValidationError("branching level beyond precomputed range");
  }
  return kappa_[n];
}

double DyadicModel::level_tail(std::size_t n) const {
  return n < tail_.size() ? tail_[n] : 0.0;
}

double DyadicModel::level_weight(std::size_t n) const {
  return level_tail(n) - level_tail(n + 1);
}

double DyadicModel::level_density(std::size_t n, double x) const {
  if (n + 1 > static_cast<std::size_t>(1060)) return 0.0;
  const int shift = static_cast<int>(n) + 1;
  const double t = std::ldexp(x, shift);
  if (t <= 4.0 || t >= 8.0) return 0.0;
  const KernelCoefficients c =
      kernel_coefficients(n < kappa_.size() ? kappa_[n] : 1.0);
  const double v = c.both_odd * triangle_kernel(t - 4.0) +
                   c.one_even * triangle_kernel(t - 5.0) +
                   c.both_even * triangle_kernel(t - 6.0);
  return std::ldexp(v, shift);
}

double DyadicModel::pair_density(double x) const {
  std::size_t n = 0;
  if (!level_of(x, n)) return 0.0;
  if (n >= kappa_.size()) return 0.0;
  // Adjacent level supports touch only at endpoints where both densities
  // vanish, so a single level contributes.
  return level_weight(n) * level_density(n, x);
}

double DyadicModel::pair_cdf(double eps) const {
  if (!(eps > 0.0)) return 0.0;
  if (eps >= 4.0) return 1.0;
  std::size_t n = 0;
  if (!level_of(eps, n)) return 0.0;
  if (n >= kappa_.size()) return 0.0;
  const double t = std::ldexp(eps, static_cast<int>(n) + 1);
  const KernelCoefficients c = kernel_coefficients(kappa_[n]);
  const double within = c.both_odd * triangle_kernel_cdf(t - 4.0) +
                        c.one_even * triangle_kernel_cdf(t - 5.0) +
                        c.both_even * triangle_kernel_cdf(t - 6.0);
  return level_tail(n + 1) + level_weight(n) * within;
}

double DyadicModel::sample_root_distance(Rng& rng) const {
  // Descent passes one edge per level, of length 2^-(n+1) (odd child) or
  // 2 * 2^-(n+1) (even child), each with probability one half regardless of
  // the branching count.  The constant parts sum to exactly 1; the random
  // parts form a uniform binary expansion, truncated at 53 generated bits.
  double u = 0.0;
  for (int n = 53; n >= 0; --n) {
    if (rng.coin()) u += std::ldexp(1.0, -(n + 1));
  }
  return 1.0 + u;
}

double DyadicModel::sample_pair_distance(Rng& rng) const {
  // Splitting level, then the parity category of the two divergent descent
  // steps, then two independent uniform tails.  Child indices are never drawn
  // explicitly, so arbitrarily large branching counts cost nothing.
  const double u = rng.uniform01();
  std::size_t level = kappa_.size() - 1;
  double cum = 0.0;
  for (std::size_t n = 0; n < kappa_.size(); ++n) {
    cum += level_weight(n);
    if (u < cum) {
      level = n;
      break;
    }
  }
  const KernelCoefficients c = kernel_coefficients(kappa_[level]);
  const double v = rng.uniform01();
  int evens = 2;
  if (v < c.both_odd) {
    evens = 0;
  } else if (v < c.both_odd + c.one_even) {
    evens = 1;
  }
  const double body =
      4.0 + static_cast<double>(evens) + rng.uniform01() + rng.uniform01();
  return std::ldexp(body, -(static_cast<int>(level) + 1));
}

std::vector<double> DyadicModel::kappa_prefix(std::size_t count) const {
  const std::size_t n = std::min(count, kappa_.size());
  return std::vector<double>(kappa_.begin(),
                             kappa_.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace feasidist
