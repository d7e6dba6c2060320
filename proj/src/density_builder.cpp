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

#include "feasidist/density_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "feasidist/common.hpp"
#include "feasidist/piecewise_linear.hpp"

namespace feasidist {
namespace {

// One-sided rounding guard: a quotient a few ulps above an integer (floating
// artifact) snaps down instead of adding a whole extra unit.
double guarded_ceil(double v) { return std::ceil(v * (1.0 - 4e-15)); }

// Keeps the highest-ratio points seen, best first.
class WorstTracker {
 public:
  explicit WorstTracker(std::size_t cap) : cap_(cap) {}

  void add(double x, double ratio) {
    auto pos = std::find_if(items_.begin(), items_.end(),
                            [&](const auto& it) { return it.second < ratio; });
    items_.insert(pos, {x, ratio});
    if (items_.size() > cap_) items_.pop_back();
  }

  std::vector<std::pair<double, double>> take() { return std::move(items_); }

 private:
  std::size_t cap_;
  std::vector<std::pair<double, double>> items_;
};

// Shared accumulator for both certification modes.
struct RatioScan {
  double max_ratio = 0.0;
  double argmax = 0.0;
  std::size_t violations = 0;
  std::size_t checked = 0;
  WorstTracker worst{8};

  void consider(double x, double built, double targ) {
    ++checked;
    if (targ <= 0.0) {
      if (built > 0.0) {
        ++violations;
        worst.add(x, std::numeric_limits<double>::infinity());
      }
      return;
    }
    const double ratio = built / targ;
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = x;
    }
    if (ratio > 1.0) worst.add(x, ratio);
  }

  CertifyReport finish(double bound) {
    CertifyReport report;
    report.bound = bound;
    report.max_ratio = max_ratio;
    report.argmax = argmax;
    report.support_violations = violations;
    report.points_checked = checked;
    report.pass = violations == 0 && max_ratio <= bound;
    report.worst = worst.take();
    return report;
  }
};

std::vector<double> quantile_grid(const PiecewiseLinear& pl) {
  std::vector<double> grid = linspace(pl.lo(), pl.hi(), 4096);
  grid.insert(grid.end(), pl.xs().begin(), pl.xs().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

double accuracy_constant(double beta, std::size_t n) {
  if (!(beta > 0.0) || beta >= 1.0 / 3.0) {
    throw ValidationError("margin must lie in ]0, 1/3[");
  }
  if (n < 4) {
    throw ValidationError("subdivision order must be at least 4");
  }
  const double nd = static_cast<double>(n);
  const double cells = nd * nd - 4.0 * nd + 1.0;
  return 1.0 / ((1.0 - 3.0 * beta) * (1.0 - beta)) * (nd * nd / cells) *
         (1.0 + 3.0 / nd);
}

MarginParams choose_margin_params(double zeta) {
  if (!(zeta > 0.0)) {
    throw ValidationError("accuracy parameter must be positive");
  }
  MarginParams out;
  out.beta = std::min(1.0 / 6.0, zeta / 24.0);
  for (std::size_t n = 4;; ++n) {
    const double c = accuracy_constant(out.beta, n);
    if (c <= 1.0 + zeta) {
      out.n = n;
      out.accuracy_constant = c;
      return out;
    }
    if (n > 1000000) {
      throw ConstructionError("margin parameter scan failed to converge");
    }
  }
}

std::size_t BuildParams::center_count() const {
  std::size_t total = 0;
  for (const CenterRun& run : centers) total += run.count;
  return total;
}

double BuildParams::center(std::size_t i) const {
  for (const CenterRun& run : centers) {
    if (i < run.count) return run.first + static_cast<double>(i) * eps;
    i -= run.count;
  }
  throw ValidationError("center index out of range");
}

double BuildParams::graft_scale() const {
  return eps / static_cast<double>(n);
}

BuildParams derive_params(const TargetDensity& f, double beta, std::size_t n) {
  if (!(beta > 0.0) || beta >= 1.0 / 3.0) {
    throw ValidationError("margin must lie in ]0, 1/3[");
  }
  if (n < 4) {
    throw ValidationError("subdivision order must be at least 4");
  }
  const PiecewiseLinear& pl = f.f();
  BuildParams params;
  params.beta = beta;
  params.n = n;
  params.atoms_per_cluster = n * n - 4 * n + 1;

  // Truncation quantiles on the breakpoint-plus-refinement grid: the largest
  // grid value with at most beta/2 mass below, the smallest with at most
  // beta/2 mass beyond.
  const std::vector<double> grid = quantile_grid(pl);
  const double total = pl.integral();
  const double half = beta / 2.0;
  double kappa = 0.0;
  for (double g : grid) {
    if (pl.integral_to(g) <= half) {
      kappa = g;
    } else {
      break;
    }
  }
  if (!(kappa > 0.0)) {
    throw ConstructionError("left truncation collapsed to zero");
  }
  double cap = grid.back();
  for (double g : grid) {
    if (total - pl.integral_to(g) <= half) {
      cap = g;
      break;
    }
  }
  params.left_cut = kappa;
  params.right_cut = cap;

  params.core = pl.super_level_set(beta / cap, kappa, cap);
  if (params.core.empty()) {
    throw ConstructionError("density core is empty");
  }

  // Spacing by halving from eta ^ kappa until the exact modulus of
  // continuity over [0, cap] drops below beta^2/cap.
  double eps = std::min(f.eta(), kappa);
  const double wiggle = beta * beta / cap;
  bool found = false;
  for (int step = 0; step < 200; ++step) {
    if (pl.modulus_of_continuity(eps, 0.0, cap) <= wiggle) {
      found = true;
      break;
    }
    eps /= 2.0;
  }
  if (!found) {
    throw ConstructionError("spacing search failed");
  }
  params.eps = eps;

  // Zero-distance mass: half the minimum over ]0, 4] of
  //   (eps/n) * f(eps*y/n) / Psi(y)
  // with Psi from the graft model.  Both factors are linear between the
  // breakpoints collected below, so a minimum over the ratio at breakpoints
  // is the exact minimum over the whole interval (as the denominator
  // approaches a zero of Psi, the ratio grows, never shrinks).
  const DyadicModel graft(branching_from_density(f));
  const double scale = eps / static_cast<double>(n);
  std::vector<double> ys;
  for (std::size_t m = 0; m < graft.level_count(); ++m) {
    for (int c = 4; c <= 8; ++c) {
      const double y = std::ldexp(static_cast<double>(c), -(static_cast<int>(m) + 1));
      if (y <= 4.0) ys.push_back(y);
    }
  }
  for (double b : pl.xs()) {
    if (b > 0.0 && b < 4.0 * scale) ys.push_back(b / scale);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double best = std::numeric_limits<double>::infinity();
  for (double y : ys) {
    const double psi = graft.pair_density(y);
    if (!(psi > 0.0)) continue;
    const double ratio = scale * pl(scale * y) / psi;
    best = std::min(best, ratio);
  }
  double p0 = 0.5 * best;
  if (!std::isfinite(p0) || !(p0 > 0.0)) {
    throw ConstructionError("p0 not found");
  }
  if (p0 >= 1.0) p0 = 1.0 - 1e-9;
  params.p0 = p0;

  // Greedy centers: walk each core interval left to right with stride eps.
  // A run never starts within eps of the previous run's last center, so
  // cluster supports stay interior-disjoint globally; the snapped start
  // still lies inside the new core interval (the skipped stretch is covered
  // by the previous cluster).
  double prev_last = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : params.core) {
    CenterRun run;
    run.first = std::max(a, prev_last + eps);
    if (run.first > b) continue;
    run.count = static_cast<std::size_t>(
        std::max(1.0, guarded_ceil((b - run.first) / eps)));
    params.centers.push_back(run);
    prev_last = run.first + static_cast<double>(run.count - 1) * eps;
  }
  if (params.centers.empty()) {
    throw ConstructionError("no centers");
  }

  // One common scale making the cluster masses and p0 sum exactly to one.
  NeumaierSum mass;
  for (const CenterRun& run : params.centers) {
    for (std::size_t t = 0; t < run.count; ++t) {
      mass.add(eps * pl(run.first + static_cast<double>(t) * eps));
    }
  }
  const double weighted = mass.value();
  if (!(weighted > 0.0)) {
    throw ConstructionError("density vanishes at every center");
  }
  params.alpha = (1.0 - p0) / weighted;
  if (params.alpha >= 1.0 / (1.0 - 3.0 * beta)) {
    throw ConstructionError("alpha bound violated");
  }
  return params;
}

DiscretizedTarget::DiscretizedTarget(const TargetDensity& f, BuildParams params)
    : params_(std::move(params)) {
  const PiecewiseLinear& pl = f.f();
  cluster_mass_.reserve(params_.center_count());
  cluster_prefix_.reserve(params_.center_count());
  NeumaierSum prefix;
  for (const CenterRun& run : params_.centers) {
    for (std::size_t t = 0; t < run.count; ++t) {
      const double d = run.first + static_cast<double>(t) * params_.eps;
      const double q = params_.alpha * params_.eps * pl(d);
      if (!(q > 0.0)) {
        throw ValidationError("cluster with nonpositive mass");
      }
      cluster_mass_.push_back(q);
      prefix.add(q);
      cluster_prefix_.push_back(prefix.value());
    }
  }
  if (cluster_mass_.empty()) {
    throw ValidationError("no clusters");
  }
}

double DiscretizedTarget::total_mass() const {
  return params_.p0 + cluster_prefix_.back();
}

double DiscretizedTarget::atom_count() const {
  return static_cast<double>(cluster_mass_.size()) *
         static_cast<double>(params_.atoms_per_cluster);
}

double DiscretizedTarget::atom_spacing() const {
  return params_.eps / (static_cast<double>(params_.n) *
                        static_cast<double>(params_.n));
}

double DiscretizedTarget::largest_distance() const {
  const CenterRun& last = params_.centers.back();
  const double d = last.first + static_cast<double>(last.count - 1) * params_.eps;
  const double top = static_cast<double>(params_.n) * static_cast<double>(params_.n) -
                     4.0 * static_cast<double>(params_.n);
  return d + top * atom_spacing();
}

FiniteTarget DiscretizedTarget::flatten(std::size_t max_atoms) const {
  const double count = 1.0 + atom_count();
  if (count > static_cast<double>(max_atoms)) {
    throw ConstructionError(
        "flattening too large: " + std::to_string(count) +
        " atoms exceeds cap " + std::to_string(max_atoms));
  }
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  atoms.push_back({0.0, params_.p0});
  const double spacing = atom_spacing();
  const std::size_t per = params_.atoms_per_cluster;
  for (std::size_t i = 0; i < cluster_mass_.size(); ++i) {
    const double d = center(i);
    const double m = cluster_mass_[i] / static_cast<double>(per);
    for (std::size_t j = 0; j < per; ++j) {
      atoms.push_back({d + static_cast<double>(j) * spacing, m});
    }
  }
  return FiniteTarget(std::move(atoms));
}

double cluster_kernel_sum(std::size_t n, double y) {
  const double nd = static_cast<double>(n);
  const long long j_max = static_cast<long long>(n * n - 4 * n);
  long long j = std::max(0LL, static_cast<long long>(std::floor(nd * (y - 4.0))));
  double sum = 0.0;
  for (; j <= j_max; ++j) {
    const double arg = y - static_cast<double>(j) / nd - 2.0;
    if (arg <= 0.0) break;
    sum += triangle_kernel(arg);
  }
  return sum;
}

double cluster_kernel_sum_cdf(std::size_t n, double y) {
  const double nd = static_cast<double>(n);
  const long long j_max = static_cast<long long>(n * n - 4 * n);
  long long full = static_cast<long long>(std::floor(nd * (y - 4.0))) + 1;
  full = std::clamp(full, 0LL, j_max + 1);
  double sum = static_cast<double>(full);
  for (long long j = full; j <= j_max; ++j) {
    const double arg = y - static_cast<double>(j) / nd - 2.0;
    if (arg <= 0.0) break;
    sum += triangle_kernel_cdf(arg);
  }
  return sum;
}

CompositeSpace::CompositeSpace(const TargetDensity& f, double zeta)
    : CompositeSpace(f, zeta,
                     [&] {
                       const MarginParams margin = choose_margin_params(zeta);
                       return derive_params(f, margin.beta, margin.n);
                     }()) {}

CompositeSpace::CompositeSpace(const TargetDensity& f, double zeta,
                               BuildParams params)
    : target_(f),
      zeta_(zeta),
      skeleton_(f, std::move(params)),
      graft_(branching_from_density(f)) {}

double CompositeSpace::density(double x) const {
  if (!(x > 0.0)) return 0.0;
  const BuildParams& p = skeleton_.params();
  const double s = p.graft_scale();
  double value = 0.0;
  if (x <= 4.0 * s) {
    value += p.p0 / s * graft_.pair_density(x / s);
  }
  // Locate the cluster whose [d, d+eps] support contains x, if any.
  std::size_t base = 0;
  for (const CenterRun& run : p.centers) {
    if (x >= run.first) {
      const double off = (x - run.first) / p.eps;
      if (off < static_cast<double>(run.count)) {
        const std::size_t t = std::min(
            static_cast<std::size_t>(off), run.count - 1);
        const double d = run.first + static_cast<double>(t) * p.eps;
        const double y = (x - d) / s;
        if (y >= 0.0 && y <= static_cast<double>(p.n)) {
          const double coef =
              skeleton_.cluster_mass(base + t) /
              (static_cast<double>(p.atoms_per_cluster) * s);
          value += coef * cluster_kernel_sum(p.n, y);
        }
        break;
      }
    }
    base += run.count;
  }
  return value;
}

double CompositeSpace::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  const BuildParams& p = skeleton_.params();
  const double s = p.graft_scale();
  double acc = p.p0 * graft_.pair_cdf(x / s);

  // Count clusters whose support [d, d+eps] lies fully at or below x.
  std::size_t full = 0;
  for (const CenterRun& run : p.centers) {
    if (x >= run.first + static_cast<double>(run.count) * p.eps) {
      full += run.count;
      continue;
    }
    if (x > run.first) {
      const double off = (x - run.first) / p.eps;
      full += std::min(static_cast<std::size_t>(off), run.count);
    }
    break;
  }
  if (full > 0) acc += skeleton_.cluster_prefix()[full - 1];
  if (full < skeleton_.cluster_count()) {
    const double d = skeleton_.center(full);
    const double y = (x - d) / s;
    if (y > 0.0) {
      const double share = cluster_kernel_sum_cdf(p.n, y) /
                           static_cast<double>(p.atoms_per_cluster);
      acc += skeleton_.cluster_mass(full) * std::min(1.0, share);
    }
  }
  return acc;
}

double CompositeSpace::density_integral() const {
  return skeleton_.total_mass();
}

double CompositeSpace::sample_pair(Rng& rng) const {
  const BuildParams& p = skeleton_.params();
  const double s = p.graft_scale();
  const double u = rng.uniform01();
  if (u < p.p0) {
    return s * graft_.sample_pair_distance(rng);
  }
  const double t = u - p.p0;
  const std::vector<double>& prefix = skeleton_.cluster_prefix();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), t);
  std::size_t c = static_cast<std::size_t>(it - prefix.begin());
  if (c >= prefix.size()) c = prefix.size() - 1;
  const std::uint64_t j = rng.bounded(p.atoms_per_cluster);
  const double body = 2.0 + rng.uniform01() + rng.uniform01();
  return skeleton_.center(c) + static_cast<double>(j) * skeleton_.atom_spacing() +
         s * body;
}

std::vector<double> CompositeSpace::sample_pairs(std::size_t count,
                                                 SamplerState state,
                                                 unsigned threads) const {
  return chunked_draws(count, state, threads,
                       [this](Rng& rng) { return sample_pair(rng); });
}

TreeStructure CompositeSpace::materialize_skeleton(const BuildCaps& caps) const {
  return build_finite(skeleton_.flatten(caps.max_leaves), caps);
}

PlanCheck CompositeSpace::verify_plan() const {
  const BuildParams& p = skeleton_.params();
  const std::size_t k = skeleton_.cluster_count();
  const std::size_t per = p.atoms_per_cluster;
  const std::vector<double>& prefix = skeleton_.cluster_prefix();

  long double residual = 1.0L;
  long double tv = 0.0L;
  double max_share = 0.0;
  // Walk atoms from the largest down.  Prefix masses are anchored per
  // cluster (never maintained by running subtraction): the mass up to atom
  // u of cluster i is base_i + (u+1) * m_i, with base_i a compensated sum.
  for (std::size_t i = k; i-- > 0;) {
    const double base = p.p0 + (i > 0 ? prefix[i - 1] : 0.0);
    const double m = skeleton_.cluster_mass(i) / static_cast<double>(per);
    double hi = base + static_cast<double>(per) * m;
    for (std::size_t u = per; u-- > 0;) {
      const double lo = u == 0 ? base : base + static_cast<double>(u) * m;
      const long double share =
          static_cast<long double>(lo) / static_cast<long double>(hi);
      tv += std::fabs(residual * (1.0L - share) - static_cast<long double>(m));
      residual *= share;
      if (static_cast<double>(share) > max_share) {
        max_share = static_cast<double>(share);
      }
      hi = lo;
    }
  }
  PlanCheck check;
  check.zero_mass_gap =
      static_cast<double>(std::fabs(residual - static_cast<long double>(p.p0)));
  check.total_variation =
      0.5 * (static_cast<double>(tv) + check.zero_mass_gap);
  check.max_split_share = max_share;
  check.atoms = skeleton_.atom_count();
  check.log2_projected_leaves = -std::log2(p.p0);
  return check;
}

CertifyReport CompositeSpace::certify(double bound,
                                      std::size_t points_per_piece) const {
  const BuildParams& p = skeleton_.params();
  const PiecewiseLinear& pl = target_.f();
  const double s = p.graft_scale();
  RatioScan scan;

  // Graft-part kinks near zero.
  for (std::size_t m = 0; m < graft_.level_count(); ++m) {
    for (int c = 4; c <= 8; ++c) {
      const double y = std::ldexp(static_cast<double>(c),
                                  -(static_cast<int>(m) + 1));
      if (y > 4.0) continue;
      const double x = s * y;
      scan.consider(x, density(x), pl(x));
    }
  }

  // Every kink of every cluster: y = 2 + v/n, one shared value table.
  const std::size_t n = p.n;
  const std::size_t kinks = n * n - 2 * n + 1;
  std::vector<double> table(kinks);
  for (std::size_t v = 0; v < kinks; ++v) {
    table[v] = cluster_kernel_sum(
        n, 2.0 + static_cast<double>(v) / static_cast<double>(n));
  }
  const double per = static_cast<double>(p.atoms_per_cluster);
  for (std::size_t i = 0; i < skeleton_.cluster_count(); ++i) {
    const double d = skeleton_.center(i);
    const double coef = skeleton_.cluster_mass(i) / (per * s);
    for (std::size_t v = 0; v < kinks; ++v) {
      const double y = 2.0 + static_cast<double>(v) / static_cast<double>(n);
      const double x = d + s * y;
      scan.consider(x, coef * table[v], pl(x));
    }
  }

  // Target breakpoints plus a uniform refinement of every target piece.
  const std::vector<double>& bx = pl.xs();
  for (std::size_t i = 0; i + 1 < bx.size(); ++i) {
    const std::vector<double> piece =
        linspace(bx[i], bx[i + 1], points_per_piece + 2);
    for (double x : piece) scan.consider(x, density(x), pl(x));
  }
  return scan.finish(bound);
}

CertifyReport CompositeSpace::certify_pruned(double bound) const {
  const BuildParams& p = skeleton_.params();
  const PiecewiseLinear& pl = target_.f();
  const double s = p.graft_scale();
  RatioScan scan;

  for (std::size_t m = 0; m < graft_.level_count(); ++m) {
    for (int c = 4; c <= 8; ++c) {
      const double y = std::ldexp(static_cast<double>(c),
                                  -(static_cast<int>(m) + 1));
      if (y > 4.0) continue;
      const double x = s * y;
      scan.consider(x, density(x), pl(x));
    }
  }

  const std::size_t n = p.n;
  const std::size_t kinks = n * n - 2 * n + 1;
  std::vector<double> table(kinks);
  std::vector<std::size_t> order(kinks);
  for (std::size_t v = 0; v < kinks; ++v) {
    table[v] = cluster_kernel_sum(
        n, 2.0 + static_cast<double>(v) / static_cast<double>(n));
    order[v] = v;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table[a] > table[b]; });

  const double per = static_cast<double>(p.atoms_per_cluster);
  for (std::size_t i = 0; i < skeleton_.cluster_count(); ++i) {
    const double d = skeleton_.center(i);
    const double coef = skeleton_.cluster_mass(i) / (per * s);
    const double fmin = pl.min_on(d, d + p.eps);
    if (!(fmin > 0.0)) {
      // Degenerate cluster: scan every kink without pruning.
      for (std::size_t v = 0; v < kinks; ++v) {
        const double y = 2.0 + static_cast<double>(v) / static_cast<double>(n);
        const double x = d + s * y;
        scan.consider(x, coef * table[v], pl(x));
      }
      continue;
    }
    // Kinks in descending kernel-sum order: once even the cluster-wide
    // lower bound on the target cannot push the ratio past the running
    // maximum, no remaining kink of this cluster can either.
    for (std::size_t v : order) {
      if (coef * table[v] / fmin <= scan.max_ratio) break;
      const double y = 2.0 + static_cast<double>(v) / static_cast<double>(n);
      const double x = d + s * y;
      scan.consider(x, coef * table[v], pl(x));
    }
  }

  // Target breakpoints can fall inside cluster supports where the target's
  // local minimum is not attained at a kernel kink; evaluate them directly,
  // along with a fixed per-piece refinement.
  const std::vector<double>& bx = pl.xs();
  for (std::size_t i = 0; i + 1 < bx.size(); ++i) {
    const std::vector<double> piece = linspace(bx[i], bx[i + 1], 1002);
    for (double x : piece) scan.consider(x, density(x), pl(x));
  }
  return scan.finish(bound);
}

}  // namespace feasidist
