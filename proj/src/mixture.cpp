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

#include "feasidist/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "feasidist/common.hpp"

namespace feasidist {
namespace {

// Each level is built at accuracy 1/2, so its density stays below 3/2 of the
// level's input and the halved remainder 2*input - proxy stays nonnegative.
constexpr double kResidualBound = 1.5;
constexpr double kRatioFloatTol = 1e-9;
constexpr double kDriftCap = 1e-8;
constexpr double kInitialChordWidth = 0.002;
constexpr int kMaxChordHalvings = 10;

struct ProxyFit {
  PiecewiseLinear proxy;
  double ratio_sup = 0.0;
};

// End of the covered core: the last cluster's support reaches one spacing
// width past the last center.
double coverage_end(const BuildParams& params) {
  const CenterRun& last = params.centers.back();
  return last.first + static_cast<double>(last.count) * params.eps;
}

// First node of f at or beyond x where f vanishes; domain end when none does.
// The proxy must not extend past this point, or it would be positive where
// the input is identically zero.
double first_zero_node_after(const PiecewiseLinear& f, double x) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.xs()[i] >= x && f.ys()[i] <= 0.0) return f.xs()[i];
  }
  return f.hi();
}

// Mass of the candidate proxy with follow-zone end u0: the input f itself on
// [0, u0], a width-w chord to alpha*f, the alpha plateau to v0, then a chord
// to zero at v1.  Exact (every piece is linear or a scaled copy of f).
double proxy_mass(const PiecewiseLinear& f, double alpha, double u0, double w,
                  double v0, double v1) {
  const double u1 = std::min(u0 + w, v0);
  double mass = f.integral_to(u0);
  mass += (u1 - u0) * (f(u0) + alpha * f(u1)) / 2.0;
  mass += alpha * (f.integral_to(v0) - f.integral_to(u1));
  if (v1 > v0) mass += (v1 - v0) * alpha * f(v0) / 2.0;
  return mass;
}

// Node assembly for the shape above.  Chord interiors carry no nodes (they
// are straight lines); follow-zone and plateau segments reuse f's nodes so
// the proxy matches f (resp. alpha*f) exactly there, node for node.
PiecewiseLinear assemble_proxy(const PiecewiseLinear& f, double alpha,
                               double u0, double w, double v0, double v1) {
  const double u1 = std::min(u0 + w, v0);
  std::vector<double> xs;
  std::vector<double> ys;
  auto push = [&](double x, double y) {
    if (!xs.empty() && x <= xs.back()) return;
    xs.push_back(x);
    ys.push_back(y);
  };
  push(f.lo(), f(f.lo()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.xs()[i];
    if (x >= u0) break;
    push(x, f.ys()[i]);
  }
  push(u0, f(u0));
  push(u1, alpha * f(u1));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.xs()[i];
    if (x <= u1) continue;
    if (x >= v0) break;
    push(x, alpha * f.ys()[i]);
  }
  push(v0, alpha * f(v0));
  if (v1 > v0) push(v1, 0.0);
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

// Exact sup of proxy/f over the proxy's domain.  Both functions are linear
// between merged breakpoints, so the ratio is monotone on each gap and the
// sup sits at a breakpoint.  A positive proxy where f vanishes is a
// violation (the ratio is infinite there).
bool ratio_exceeds(const PiecewiseLinear& proxy, const PiecewiseLinear& f,
                   double bound, double* sup_out) {
  std::vector<double> xs(proxy.xs());
  for (double x : f.xs()) {
    if (x <= proxy.hi()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double sup = 0.0;
  bool violated = false;
  for (double x : xs) {
    const double built = proxy(x);
    const double target = f(x);
    if (target <= 0.0) {
      if (built > 1e-12) violated = true;
      continue;
    }
    sup = std::max(sup, built / target);
  }
  *sup_out = sup;
  return violated || sup > bound;
}

// Fits the level's subtracted law: follow the input exactly near zero (so the
// next residual keeps the input's shape there instead of doubling a gap every
// level), ride at alpha times the input across the covered core, and close
// both transitions with short chords.  The follow-zone end u0 is solved by
// bisection so the total mass is one; the chord width is halved when a chord
// overshoots the 3/2 bound against a local dip of the input.
ProxyFit build_proxy(const TargetDensity& input, const BuildParams& params) {
  const PiecewiseLinear& f = input.f();
  const double hi = f.hi();
  const double alpha = params.alpha;
  const double v0 = std::min(coverage_end(params), hi);
  double w = kInitialChordWidth;
  std::string reason = "no attempt";
  for (int attempt = 0; attempt < kMaxChordHalvings; ++attempt, w /= 2.0) {
    const double v1 = std::min({v0 + w, hi, first_zero_node_after(f, v0)});
    const double u_hi = std::max(v0 - w, 0.0);
    auto mass = [&](double u0) { return proxy_mass(f, alpha, u0, w, v0, v1); };
    const double m_lo = mass(0.0);
    const double m_hi = mass(u_hi);
    double u0 = 0.0;
    if (u_hi > 0.0 && (m_lo - 1.0) * (m_hi - 1.0) <= 0.0) {
      double a = 0.0;
      double b = u_hi;
      double fa = m_lo - 1.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = (a + b) / 2.0;
        if (mid <= a || mid >= b) break;
        const double fm = mass(mid) - 1.0;
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      u0 = (std::abs(mass(a) - 1.0) <= std::abs(mass(b) - 1.0)) ? a : b;
    } else {
      // No sign change: take the end closer to unit mass and rescale below.
      u0 = (std::abs(m_lo - 1.0) <= std::abs(m_hi - 1.0)) ? 0.0 : u_hi;
    }
    PiecewiseLinear proxy = assemble_proxy(f, alpha, u0, w, v0, v1);
    const double total = proxy.integral();
    if (!(total > 0.0)) {
      reason = "empty proxy";
      continue;
    }
    if (std::abs(total - 1.0) > 1e-12) proxy.scale(1.0 / total);
    double sup = 0.0;
    if (!ratio_exceeds(proxy, f, kResidualBound + kRatioFloatTol, &sup)) {
      return ProxyFit{std::move(proxy), sup};
    }
    reason = "sup ratio " + std::to_string(sup);
  }
  throw ConstructionError("proxy exceeds the residual bound (" + reason + ")");
}

}  // namespace

MixtureSpace::MixtureSpace(TargetDensity original,
                           std::vector<MixtureLevel> levels,
                           TargetDensity residual)
    : original_(std::move(original)),
      levels_(std::move(levels)),
      residual_(std::move(residual)) {
  if (levels_.empty()) {
    throw ValidationError("mixture needs at least one level");
  }
}

double MixtureSpace::residual_weight() const { return levels_.back().weight; }

CompositeSpace MixtureSpace::component_space(std::size_t level) const {
  if (level >= levels_.size()) {
    throw ValidationError("level index out of range");
  }
  const MixtureLevel& lvl = levels_[level];
  return CompositeSpace(lvl.input, 0.5, lvl.params);
}

double MixtureSpace::reconstruction_gap(const std::vector<double>& grid) const {
  double gap = 0.0;
  for (double x : grid) {
    NeumaierSum sum;
    for (const MixtureLevel& lvl : levels_) {
      sum.add(lvl.weight * lvl.proxy(x));
    }
    sum.add(residual_weight() * residual_(x));
    gap = std::max(gap, std::abs(original_(x) - sum.value()));
  }
  return gap;
}

EmpiricalSample MixtureSpace::annealed_sample(std::size_t count,
                                              SamplerState state,
                                              unsigned threads) const {
  std::vector<double> values =
      chunked_draws(count, state, threads, [this](Rng& rng) {
        // Two uniforms per draw, always, so replays stay stream-aligned.
        const double pick = rng.uniform01();
        const double level_u = rng.uniform01();
        double cumulative = 0.0;
        for (const MixtureLevel& lvl : levels_) {
          cumulative += lvl.weight;  // partial sums 1 - 2^{-k}, exact
          if (pick < cumulative) {
            return lvl.proxy.inverse_prefix(level_u * lvl.proxy.integral());
          }
        }
        const PiecewiseLinear& tail = residual_.f();
        return tail.inverse_prefix(level_u * tail.integral());
      });
  return EmpiricalSample{std::move(values), state};
}

std::vector<std::size_t> MixtureSpace::component_histogram(
    std::size_t count, SamplerState state) const {
  const std::vector<double> picks =
      chunked_draws(count, state, 1, [this](Rng& rng) {
        const double pick = rng.uniform01();
        (void)rng.uniform01();  // keep the stream aligned with annealed_sample
        double cumulative = 0.0;
        for (std::size_t k = 0; k < levels_.size(); ++k) {
          cumulative += levels_[k].weight;
          if (pick < cumulative) return static_cast<double>(k);
        }
        return static_cast<double>(levels_.size());
      });
  std::vector<std::size_t> hist(levels_.size() + 1, 0);
  for (double p : picks) ++hist[static_cast<std::size_t>(p)];
  return hist;
}

MixtureSpace decompose(const TargetDensity& f, std::size_t levels) {
  if (levels < 1 || levels > 40) {
    throw ValidationError("level count must lie in [1, 40]");
  }
  const MarginParams margin = choose_margin_params(0.5);
  std::vector<MixtureLevel> built;
  built.reserve(levels);
  TargetDensity current = f;
  double weight = 1.0;
  for (std::size_t k = 1; k <= levels; ++k) {
    weight /= 2.0;
    BuildParams params = derive_params(current, margin.beta, margin.n);
    CompositeSpace space(current, 0.5, params);
    CertifyReport cert = space.certify_pruned(kResidualBound);
    if (!cert.pass) {
      throw CertificationError("certify failure at level " + std::to_string(k));
    }
    ProxyFit fit = build_proxy(current, params);

    // Distance between the law actually subtracted (the proxy) and the law
    // the certified space realizes; reported, never hidden.
    double gap = 0.0;
    {
      const double probe_hi =
          std::max(fit.proxy.hi(), coverage_end(params));
      std::vector<double> probe = linspace(0.0, probe_hi, 4097);
      probe.insert(probe.end(), fit.proxy.xs().begin(), fit.proxy.xs().end());
      std::sort(probe.begin(), probe.end());
      probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
      for (double x : probe) {
        gap = std::max(gap,
                       std::abs(space.cdf(x) - fit.proxy.integral_to(x)));
      }
    }

    // Halving recursion on the remainder.  Values at merged nodes are exact;
    // the 3/2 bound keeps them nonnegative up to float noise, which is
    // clamped, and the mass drift is rescaled away and logged.
    PiecewiseLinear next =
        PiecewiseLinear::combine(2.0, current.f(), -1.0, fit.proxy);
    std::vector<double> ys = next.ys();
    for (double& y : ys) {
      if (y < -1e-9) {
        throw ConstructionError("residual went negative at a node");
      }
      if (y < 0.0) y = 0.0;
    }
    PiecewiseLinear clamped(next.xs(), std::move(ys));
    const double total = clamped.integral();
    const double drift = std::abs(total - 1.0);
    if (drift > kDriftCap) {
      throw ConstructionError("residual mass drift too large: " +
                              std::to_string(drift));
    }
    clamped.scale(1.0 / total);
    TargetDensity remainder(std::move(clamped), f.eta());

    built.push_back(MixtureLevel{weight, std::move(params), std::move(cert),
                                 std::move(current), std::move(fit.proxy),
                                 fit.ratio_sup, gap, drift});
    current = std::move(remainder);
  }
  return MixtureSpace(f, std::move(built), std::move(current));
}

}  // namespace feasidist
