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
//
// Command-line front end: builds explicit spaces for prescribed two-point
// distance laws and verifies them.  JSON in, CSV/JSON out; identical
// invocations produce byte-identical artifacts.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "feasidist/common.hpp"
#include "feasidist/density_builder.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/dyadic.hpp"
#include "feasidist/feasibility.hpp"
#include "feasidist/io.hpp"
#include "feasidist/mixture.hpp"
#include "feasidist/piecewise_linear.hpp"
#include "feasidist/rng.hpp"
#include "feasidist/tree.hpp"

namespace {

using namespace feasidist;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CDF adapter over a closed-form continuous CDF.
class FunctionCdf : public Cdf {
 public:
  explicit FunctionCdf(std::function<double(double)> f) : f_(std::move(f)) {}
  double operator()(double x) const override { return f_(x); }

 private:
  std::function<double(double)> f_;
};

std::uint64_t env_seed_or(std::uint64_t fallback) {
  const char* env = std::getenv("FEASIDIST_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw ValidationError("FEASIDIST_SEED must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(parsed);
}

std::vector<double> parse_kappa_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ValidationError("kappa list must be comma-separated numbers");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

// Per-subcommand options; seed resolution order: --seed flag, FEASIDIST_SEED,
// then the default 42.
struct SeedOption {
  std::uint64_t value = 42;
  CLI::Option* option = nullptr;

  void attach(CLI::App* sub) {
    option = sub->add_option("--seed", value, "RNG seed (default 42)");
  }
  std::uint64_t resolve() const {
    return option->count() > 0 ? value : env_seed_or(value);
  }
};

int run_build_finite(const std::string& target_path, const std::string& out) {
  const FiniteTarget target = read_finite_target(target_path);
  const TreeStructure tree = build_finite(target);
  write_text_file(out, json_text(tree));
  std::cout << "nodes: " << tree.node_count() << "\n"
            << "mass_points: " << tree.mass_nodes().size() << "\n"
            << "depth: " << fmt17(target.largest_distance() / 2.0) << "\n";
  return 0;
}

int run_verify_tree(const std::string& tree_path, const std::string& target_path,
                    const std::string& mode, std::size_t samples,
                    std::uint64_t seed) {
  const TreeStructure tree = read_tree(tree_path);
  const FiniteTarget target = read_finite_target(target_path);
  if (mode == "exact") {
    const DiscreteDistribution law = exact_two_point(tree);
    const double tv = total_variation_atoms(law, target);
    std::cout << "total_variation: " << fmt17(tv) << "\n";
    if (tv > 1e-9) {
      throw CertificationError("two-point law deviates from the target (TV " +
                               fmt17(tv) + ")");
    }
    return 0;
  }
  std::vector<double> values;
  std::vector<double> masses;
  for (const Atom& a : target.atoms()) {
    values.push_back(a.distance);
    masses.push_back(a.mass);
  }
  const DiscreteDistribution reference(std::move(values), std::move(masses));
  const EmpiricalSample draw =
      sample_two_point(tree, samples, SamplerState{seed, 0});
  const double ks = ks_statistic(draw.values, StepCdf(reference));
  const double bound = 2.0 / std::sqrt(static_cast<double>(samples));
  std::cout << "ks: " << fmt17(ks) << "\n";
  if (ks > bound) {
    throw CertificationError("sampled law deviates from the target (KS " +
                             fmt17(ks) + " > " + fmt17(bound) + ")");
  }
  return 0;
}

int run_dyadic(const std::string& kappa_list, const std::string& envelope_path,
               const std::string& density_path, const std::string& emit_density,
               const std::string& emit_cdf, std::size_t samples,
               std::uint64_t seed, bool no_header) {
  const int sources = (kappa_list.empty() ? 0 : 1) +
                      (envelope_path.empty() ? 0 : 1) +
                      (density_path.empty() ? 0 : 1);
  if (sources != 1) {
    throw ValidationError(
        "choose exactly one of --kappa-list, --envelope, --from-density");
  }
  std::optional<DyadicModel> model;
  if (!kappa_list.empty()) {
    model.emplace(branching_from_list(parse_kappa_list(kappa_list)));
  } else if (!envelope_path.empty()) {
    model.emplace(branching_from_envelope(read_envelope(envelope_path)));
  } else {
    model.emplace(branching_from_density(read_density(density_path)));
  }
  std::cout << "levels: " << model->level_count() << "\n";
  std::string prefix;
  for (double k : model->kappa_prefix(12)) {
    if (!prefix.empty()) prefix += ',';
    prefix += fmt17(k);
  }
  std::cout << "kappa_prefix: " << prefix << "\n";
  const std::vector<double> grid = linspace(0.0, 4.0, 4097);
  if (!emit_density.empty()) {
    std::vector<double> ys;
    ys.reserve(grid.size());
    for (double x : grid) ys.push_back(model->pair_density(x));
    write_text_file(emit_density, csv_xy(grid, ys, !no_header));
  }
  if (!emit_cdf.empty()) {
    std::vector<double> ys;
    ys.reserve(grid.size());
    for (double x : grid) ys.push_back(model->pair_cdf(x));
    write_text_file(emit_cdf, csv_xy(grid, ys, !no_header));
  }
  if (samples > 0) {
    Rng rng(SamplerState{seed, 0});
    std::vector<double> draws(samples);
    for (double& d : draws) d = model->sample_pair_distance(rng);
    const double ks = ks_statistic(
        draws, FunctionCdf([&](double x) { return model->pair_cdf(x); }));
    std::cout << "pair_ks: " << fmt17(ks) << "\n";
  }
  return 0;
}

int run_build_density(const std::string& f_path, double zeta,
                      const std::string& out, const std::string& emit_g,
                      bool certify, std::size_t samples, std::uint64_t seed,
                      unsigned threads, bool no_header) {
  const TargetDensity f = read_density(f_path);
  const CompositeSpace space(f, zeta);
  const PlanCheck plan = space.verify_plan();
  std::cout << "clusters: " << space.skeleton().cluster_count() << "\n"
            << "plan_tv: " << fmt17(plan.total_variation) << "\n"
            << "log2_projected_leaves: " << fmt17(plan.log2_projected_leaves)
            << "\n";
  std::optional<CertifyReport> certificate;
  if (certify) {
    certificate = space.certify(1.0 + zeta, 1000);
    std::cout << "certified_ratio: " << fmt17(certificate->max_ratio) << "\n"
              << "certified_pass: " << (certificate->pass ? "true" : "false")
              << "\n";
  }
  std::optional<double> pair_ks;
  if (samples > 0) {
    const std::vector<double> draws =
        space.sample_pairs(samples, SamplerState{seed, 0}, threads);
    pair_ks = ks_statistic(
        draws, FunctionCdf([&](double x) { return space.cdf(x); }));
    std::cout << "pair_ks: " << fmt17(*pair_ks) << "\n";
  }
  write_text_file(out, space_json_text(
                           space, plan,
                           certificate.has_value() ? &*certificate : nullptr,
                           pair_ks.has_value() ? &*pair_ks : nullptr));
  if (!emit_g.empty()) {
    const std::vector<double> grid =
        linspace(0.0, space.skeleton().largest_distance(), 4097);
    std::vector<double> ys;
    ys.reserve(grid.size());
    for (double x : grid) ys.push_back(space.density(x));
    write_text_file(emit_g, csv_xy(grid, ys, !no_header));
  }
  if (certificate.has_value() && !certificate->pass) {
    throw CertificationError("domination certificate failed (sup ratio " +
                             fmt17(certificate->max_ratio) + ")");
  }
  return 0;
}

int run_decompose(const std::string& f_path, std::size_t levels,
                  const std::string& out) {
  const TargetDensity f = read_density(f_path);
  const MixtureSpace mixture = decompose(f, levels);
  write_text_file(out, mixture_json_text(mixture));
  for (std::size_t k = 0; k < mixture.level_count(); ++k) {
    const MixtureLevel& lvl = mixture.levels()[k];
    std::cout << "level " << (k + 1) << ": weight " << fmt17(lvl.weight)
              << ", clusters " << lvl.params.center_count()
              << ", certified_ratio " << fmt17(lvl.certificate.max_ratio)
              << ", proxy_gap " << fmt17(lvl.proxy_gap) << "\n";
  }
  std::cout << "residual_weight: " << fmt17(mixture.residual_weight()) << "\n";
  return 0;
}

int run_annealed_sample(const std::string& mixture_path, std::size_t samples,
                        std::uint64_t seed, const std::string& emit,
                        unsigned threads, bool no_header) {
  const MixtureRecipe recipe = read_mixture_recipe(mixture_path);
  const MixtureSpace mixture = decompose(recipe.density, recipe.levels);
  const EmpiricalSample draw =
      mixture.annealed_sample(samples, SamplerState{seed, 0}, threads);
  const double ks = ks_statistic(
      draw.values, DensityCdf(recipe.density.f()));
  std::cout << "samples: " << draw.values.size() << "\n"
            << "ks_vs_target: " << fmt17(ks) << "\n";
  if (!emit.empty()) {
    constexpr std::size_t kBins = 512;
    const double hi = recipe.density.f().hi();
    std::vector<double> edges = linspace(0.0, hi, kBins + 1);
    edges.pop_back();
    std::vector<double> counts(kBins, 0.0);
    for (double v : draw.values) {
      std::size_t bin = static_cast<std::size_t>(
          (v / hi) * static_cast<double>(kBins));
      if (bin >= kBins) bin = kBins - 1;
      counts[bin] += 1.0;
    }
    write_text_file(emit, csv_xy(edges, counts, !no_header));
  }
  return 0;
}

int run_classify(const std::string& target_path) {
  const TargetSpec spec = read_target_spec(target_path);
  std::cout << to_string(classify(spec)) << "\n";
  return 0;
}

int run_covering(const std::string& tree_path, const std::string& eps_grid,
                 const std::string& emit, bool no_header) {
  const TreeStructure tree = read_tree(tree_path);
  const std::vector<double> grid = parse_eps_grid(eps_grid);
  const std::vector<CoveringReport> reports = covering_sweep(tree, grid);
  if (!emit.empty()) {
    write_text_file(emit, csv_covering(reports, !no_header));
  }
  std::size_t failures = 0;
  for (const CoveringReport& r : reports) {
    if (!r.verdict) ++failures;
  }
  std::cout << "checked: " << reports.size() << "\n"
            << "violations: " << failures << "\n";
  if (failures > 0) {
    throw CertificationError("covering bound violated at " +
                             std::to_string(failures) + " grid points");
  }
  return 0;
}

int run_npoint(const std::string& tree_path, std::size_t n, std::uint64_t seed,
               const std::string& emit) {
  const TreeStructure tree = read_tree(tree_path);
  const std::vector<std::vector<double>> matrix =
      sample_npoint_matrix(tree, n, SamplerState{seed, 0});
  if (!emit.empty()) {
    write_text_file(emit, csv_matrix(matrix));
  }
  std::cout << "points: " << matrix.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feasidist: explicit metric spaces for prescribed two-point "
               "distance laws"};
  app.require_subcommand(1);

  // build-finite
  auto* build_finite_cmd =
      app.add_subcommand("build-finite", "Build a finite tree for an atomic target");
  std::string bf_target;
  std::string bf_out;
  build_finite_cmd->add_option("--target", bf_target, "Target JSON")->required();
  build_finite_cmd->add_option("--out", bf_out, "Output tree JSON")->required();

  // verify-tree
  auto* verify_cmd =
      app.add_subcommand("verify-tree", "Check a tree's two-point law against a target");
  std::string vt_tree;
  std::string vt_target;
  std::string vt_mode = "exact";
  std::size_t vt_samples = 1000000;
  SeedOption vt_seed;
  verify_cmd->add_option("--tree", vt_tree, "Tree JSON")->required();
  verify_cmd->add_option("--target", vt_target, "Target JSON")->required();
  verify_cmd->add_option("--mode", vt_mode, "exact or mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  verify_cmd->add_option("--samples", vt_samples, "Monte Carlo sample count");
  vt_seed.attach(verify_cmd);

  // dyadic
  auto* dyadic_cmd =
      app.add_subcommand("dyadic", "Evaluate a spherically symmetric tree model");
  std::string dy_kappas;
  std::string dy_envelope;
  std::string dy_density;
  std::string dy_emit_density;
  std::string dy_emit_cdf;
  std::size_t dy_samples = 0;
  SeedOption dy_seed;
  bool dy_no_header = false;
  dyadic_cmd->add_option("--kappa-list", dy_kappas, "Branching counts, comma-separated");
  dyadic_cmd->add_option("--envelope", dy_envelope, "CDF envelope JSON");
  dyadic_cmd->add_option("--from-density", dy_density, "Target density JSON");
  dyadic_cmd->add_option("--emit-density", dy_emit_density, "Pair density CSV path");
  dyadic_cmd->add_option("--emit-cdf", dy_emit_cdf, "Pair CDF CSV path");
  dyadic_cmd->add_option("--samples", dy_samples, "Verification sample count");
  dyadic_cmd->add_flag("--no-header", dy_no_header, "Omit the CSV header row");
  dy_seed.attach(dyadic_cmd);

  // build-density
  auto* density_cmd =
      app.add_subcommand("build-density", "Build a composite space for a density target");
  std::string bd_f;
  double bd_zeta = 0.5;
  std::string bd_out;
  std::string bd_emit_g;
  bool bd_certify = false;
  std::size_t bd_samples = 0;
  SeedOption bd_seed;
  unsigned bd_threads = 1;
  bool bd_no_header = false;
  density_cmd->add_option("--f", bd_f, "Target density JSON")->required();
  density_cmd->add_option("--zeta", bd_zeta, "Accuracy parameter in ]0, 1]");
  density_cmd->add_option("--out", bd_out, "Output space JSON")->required();
  density_cmd->add_option("--emit-g", bd_emit_g, "Built density CSV path");
  density_cmd->add_flag("--certify", bd_certify, "Run the domination certificate");
  density_cmd->add_option("--samples", bd_samples, "Verification sample count");
  density_cmd->add_option("--threads", bd_threads, "Sampling worker cap");
  density_cmd->add_flag("--no-header", bd_no_header, "Omit the CSV header row");
  bd_seed.attach(density_cmd);

  // decompose
  auto* decompose_cmd =
      app.add_subcommand("decompose", "Halving decomposition of a density target");
  std::string dc_f;
  std::size_t dc_levels = 0;
  std::string dc_out;
  decompose_cmd->add_option("--f", dc_f, "Target density JSON")->required();
  decompose_cmd->add_option("--levels", dc_levels, "Number of levels")->required();
  decompose_cmd->add_option("--out", dc_out, "Output mixture JSON")->required();

  // annealed-sample
  auto* annealed_cmd =
      app.add_subcommand("annealed-sample", "Sample the mixture law of a decomposition");
  std::string as_mixture;
  std::size_t as_samples = 1000000;
  SeedOption as_seed;
  std::string as_emit;
  unsigned as_threads = 1;
  bool as_no_header = false;
  annealed_cmd->add_option("--mixture", as_mixture, "Mixture JSON")->required();
  annealed_cmd->add_option("--samples", as_samples, "Sample count");
  annealed_cmd->add_option("--emit", as_emit, "Histogram CSV path");
  annealed_cmd->add_option("--threads", as_threads, "Sampling worker cap");
  annealed_cmd->add_flag("--no-header", as_no_header, "Omit the CSV header row");
  as_seed.attach(annealed_cmd);

  // classify
  auto* classify_cmd =
      app.add_subcommand("classify", "Feasibility screening of a target spec");
  std::string cl_target;
  classify_cmd->add_option("--target", cl_target, "Target spec JSON")->required();

  // covering
  auto* covering_cmd =
      app.add_subcommand("covering", "Covering-number lower bound sweep");
  std::string cv_tree;
  std::string cv_grid;
  std::string cv_emit;
  bool cv_no_header = false;
  covering_cmd->add_option("--tree", cv_tree, "Tree JSON")->required();
  covering_cmd->add_option("--eps-grid", cv_grid, "Grid as a:b:steps")->required();
  covering_cmd->add_option("--emit", cv_emit, "Report CSV path");
  covering_cmd->add_flag("--no-header", cv_no_header, "Omit the CSV header row");

  // npoint
  auto* npoint_cmd =
      app.add_subcommand("npoint", "Sample an n-point distance matrix");
  std::string np_tree;
  std::size_t np_n = 0;
  SeedOption np_seed;
  std::string np_emit;
  npoint_cmd->add_option("--tree", np_tree, "Tree JSON")->required();
  npoint_cmd->add_option("--n", np_n, "Number of points")->required();
  npoint_cmd->add_option("--emit", np_emit, "Matrix CSV path");
  np_seed.attach(npoint_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (app.got_subcommand(build_finite_cmd)) {
      return run_build_finite(bf_target, bf_out);
    }
    if (app.got_subcommand(verify_cmd)) {
      return run_verify_tree(vt_tree, vt_target, vt_mode, vt_samples,
                             vt_seed.resolve());
    }
    if (app.got_subcommand(dyadic_cmd)) {
      return run_dyadic(dy_kappas, dy_envelope, dy_density, dy_emit_density,
                        dy_emit_cdf, dy_samples, dy_seed.resolve(),
                        dy_no_header);
    }
    if (app.got_subcommand(density_cmd)) {
      return run_build_density(bd_f, bd_zeta, bd_out, bd_emit_g, bd_certify,
                               bd_samples, bd_seed.resolve(), bd_threads,
                               bd_no_header);
    }
    if (app.got_subcommand(decompose_cmd)) {
      return run_decompose(dc_f, dc_levels, dc_out);
    }
    if (app.got_subcommand(annealed_cmd)) {
      return run_annealed_sample(as_mixture, as_samples, as_seed.resolve(),
                                 as_emit, as_threads, as_no_header);
    }
    if (app.got_subcommand(classify_cmd)) {
      return run_classify(cl_target);
    }
    if (app.got_subcommand(covering_cmd)) {
      return run_covering(cv_tree, cv_grid, cv_emit, cv_no_header);
    }
    if (app.got_subcommand(npoint_cmd)) {
      return run_npoint(np_tree, np_n, np_seed.resolve(), np_emit);
    }
    std::cerr << "error: no subcommand selected\n";
    return 64;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
