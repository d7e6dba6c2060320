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

#include "feasidist/io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "feasidist/common.hpp"

namespace feasidist {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "feasidist/v1";

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json parse_file(const std::string& path, const std::string& kind) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != kSchema) {
    throw ValidationError(path + ": missing \"schema\": \"feasidist/v1\"");
  }
  if (j.value("kind", "") != kind) {
    throw ValidationError(path + ": expected kind \"" + kind + "\"");
  }
  return j;
}

const Json& member(const Json& j, const std::string& key,
                   const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(path + ": missing field \"" + key + "\"");
  }
  return *it;
}

double number_field(const Json& j, const std::string& key,
                    const std::string& path) {
  const Json& v = member(j, key, path);
  if (!v.is_number()) {
    throw ValidationError(path + ": field \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

std::vector<double> number_list(const Json& j, const std::string& key,
                                const std::string& path) {
  const Json& arr = member(j, key, path);
  if (!arr.is_array()) {
    throw ValidationError(path + ": field \"" + key + "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const Json& v : arr) {
    if (!v.is_number()) {
      throw ValidationError(path + ": field \"" + key +
                            "\" must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Atom> atom_list(const Json& j, const std::string& key,
                            const std::string& path) {
  const Json& arr = member(j, key, path);
  if (!arr.is_array()) {
    throw ValidationError(path + ": field \"" + key + "\" must be an array");
  }
  std::vector<Atom> atoms;
  atoms.reserve(arr.size());
  for (const Json& v : arr) {
    if (!v.is_object()) {
      throw ValidationError(path + ": atoms must be objects");
    }
    Atom a;
    a.distance = number_field(v, "distance", path);
    a.mass = number_field(v, "mass", path);
    atoms.push_back(a);
  }
  return atoms;
}

Json atoms_json(const std::vector<Atom>& atoms) {
  Json arr = Json::array();
  for (const Atom& a : atoms) {
    arr.push_back(Json{{"distance", a.distance}, {"mass", a.mass}});
  }
  return arr;
}

Json density_body(const PiecewiseLinear& f) {
  return Json{{"xs", f.xs()}, {"ys", f.ys()}};
}

Json certificate_json(const CertifyReport& report) {
  Json worst = Json::array();
  for (const auto& [x, ratio] : report.worst) {
    worst.push_back(Json::array({x, ratio}));
  }
  return Json{{"bound", report.bound},
              {"max_ratio", report.max_ratio},
              {"argmax", report.argmax},
              {"support_violations", report.support_violations},
              {"points_checked", report.points_checked},
              {"pass", report.pass},
              {"worst", std::move(worst)}};
}

template <typename Rebuild>
auto rebuild_with_path(const std::string& path, Rebuild&& rebuild) {
  try {
    return rebuild();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

std::string json_text(const FiniteTarget& target) {
  return dump(Json{{"schema", kSchema},
                   {"kind", "finite_target"},
                   {"atoms", atoms_json(target.atoms())}});
}

std::string json_text(const TreeStructure& tree) {
  Json leaf_mass = Json::object();
  for (std::size_t i = 0; i < tree.mass_nodes().size(); ++i) {
    leaf_mass[std::to_string(tree.mass_nodes()[i])] = tree.masses()[i];
  }
  return dump(Json{{"schema", kSchema},
                   {"kind", "tree"},
                   {"root", tree.root()},
                   {"parent", tree.parent()},
                   {"edge_length", tree.edge_length()},
                   {"leaf_mass", std::move(leaf_mass)}});
}

std::string json_text(const TargetDensity& density) {
  Json j{{"schema", kSchema}, {"kind", "density"}, {"eta", density.eta()}};
  j.update(density_body(density.f()));
  return dump(j);
}

std::string json_text(const CdfEnvelope& envelope) {
  return dump(Json{
      {"schema", kSchema},
      {"kind", "envelope"},
      {"mode",
       envelope.mode() == CdfEnvelope::Mode::kLinear ? "linear" : "loglog"},
      {"xs", envelope.xs()},
      {"values", envelope.values()}});
}

std::string json_text(const TargetSpec& spec) {
  Json atoms = Json::array();
  for (std::size_t i = 0; i < spec.atom_locations().size(); ++i) {
    atoms.push_back(Json{{"distance", spec.atom_locations()[i]},
                         {"mass", spec.atom_masses()[i]}});
  }
  Json j{{"schema", kSchema}, {"kind", "target_spec"}, {"atoms", std::move(atoms)}};
  if (spec.continuous().has_value()) {
    j["density"] = density_body(*spec.continuous());
  } else {
    j["density"] = nullptr;
  }
  return dump(j);
}

std::string space_json_text(const CompositeSpace& space, const PlanCheck& plan,
                            const CertifyReport* certificate,
                            const double* pair_ks) {
  const BuildParams& p = space.params();
  Json core = Json::array();
  for (const auto& [a, b] : p.core) core.push_back(Json::array({a, b}));
  Json centers = Json::array();
  for (const CenterRun& run : p.centers) {
    centers.push_back(Json{{"first", run.first}, {"count", run.count}});
  }
  const DiscretizedTarget& skeleton = space.skeleton();
  Json clusters = Json::array();
  for (std::size_t i = 0; i < skeleton.cluster_count(); ++i) {
    clusters.push_back(Json{{"center", skeleton.center(i)},
                            {"mass", skeleton.cluster_mass(i)}});
  }
  Json j{{"schema", kSchema},
         {"kind", "space"},
         {"zeta", space.zeta()},
         {"params",
          Json{{"beta", p.beta},
               {"n", p.n},
               {"left_cut", p.left_cut},
               {"right_cut", p.right_cut},
               {"eps", p.eps},
               {"p0", p.p0},
               {"alpha", p.alpha},
               {"atoms_per_cluster", p.atoms_per_cluster},
               {"core", std::move(core)},
               {"centers", std::move(centers)}}},
         {"discrete_target",
          Json{{"mass_at_zero", skeleton.mass_at_zero()},
               {"cluster_count", skeleton.cluster_count()},
               {"atom_count", skeleton.atom_count()},
               {"atom_spacing", skeleton.atom_spacing()},
               {"largest_distance", skeleton.largest_distance()},
               {"total_mass", skeleton.total_mass()},
               {"clusters", std::move(clusters)}}},
         {"plan",
          Json{{"total_variation", plan.total_variation},
               {"zero_mass_gap", plan.zero_mass_gap},
               {"max_split_share", plan.max_split_share},
               {"atoms", plan.atoms},
               {"log2_projected_leaves", plan.log2_projected_leaves}}},
         {"kappa_prefix", space.graft().kappa_prefix(16)}};
  j["certificate"] = certificate ? certificate_json(*certificate) : Json(nullptr);
  j["pair_ks"] = pair_ks ? Json(*pair_ks) : Json(nullptr);
  return dump(j);
}

std::string mixture_json_text(const MixtureSpace& mixture) {
  Json reports = Json::array();
  for (const MixtureLevel& lvl : mixture.levels()) {
    reports.push_back(Json{{"weight", lvl.weight},
                           {"cluster_count", lvl.params.center_count()},
                           {"certified_ratio", lvl.certificate.max_ratio},
                           {"proxy_ratio_sup", lvl.proxy_ratio_sup},
                           {"proxy_gap", lvl.proxy_gap},
                           {"drift", lvl.drift},
                           {"proxy", density_body(lvl.proxy)}});
  }
  Json density{{"eta", mixture.original().eta()}};
  density.update(density_body(mixture.original().f()));
  return dump(Json{{"schema", kSchema},
                   {"kind", "mixture"},
                   {"levels", mixture.level_count()},
                   {"zeta", 0.5},
                   {"density", std::move(density)},
                   {"level_reports", std::move(reports)},
                   {"residual", density_body(mixture.residual().f())}});
}

FiniteTarget read_finite_target(const std::string& path) {
  const Json j = parse_file(path, "finite_target");
  std::vector<Atom> atoms = atom_list(j, "atoms", path);
  return rebuild_with_path(path, [&] { return FiniteTarget(std::move(atoms)); });
}

TreeStructure read_tree(const std::string& path) {
  const Json j = parse_file(path, "tree");
  const Json& parent_json = member(j, "parent", path);
  if (!parent_json.is_array()) {
    throw ValidationError(path + ": field \"parent\" must be an array");
  }
  std::vector<int> parent;
  parent.reserve(parent_json.size());
  for (const Json& v : parent_json) {
    if (!v.is_number_integer()) {
      throw ValidationError(path + ": parent entries must be integers");
    }
    parent.push_back(v.get<int>());
  }
  std::vector<double> edge_length = number_list(j, "edge_length", path);
  const Json& root_json = member(j, "root", path);
  if (!root_json.is_number_integer()) {
    throw ValidationError(path + ": field \"root\" must be an integer");
  }
  const int root = root_json.get<int>();
  const Json& leaf_mass = member(j, "leaf_mass", path);
  if (!leaf_mass.is_object()) {
    throw ValidationError(path + ": field \"leaf_mass\" must be an object");
  }
  std::vector<int> mass_nodes;
  std::vector<double> masses;
  for (const auto& [key, value] : leaf_mass.items()) {
    int node = 0;
    try {
      node = std::stoi(key);
    } catch (const std::exception&) {
      throw ValidationError(path + ": leaf_mass keys must be node indices");
    }
    if (!value.is_number()) {
      throw ValidationError(path + ": leaf_mass values must be numbers");
    }
    mass_nodes.push_back(node);
    masses.push_back(value.get<double>());
  }
  return rebuild_with_path(path, [&] {
    return TreeStructure(std::move(parent), std::move(edge_length), root,
                         std::move(mass_nodes), std::move(masses));
  });
}

TargetDensity read_density(const std::string& path) {
  const Json j = parse_file(path, "density");
  std::vector<double> xs = number_list(j, "xs", path);
  std::vector<double> ys = number_list(j, "ys", path);
  const double eta = number_field(j, "eta", path);
  return rebuild_with_path(path, [&] {
    return TargetDensity(PiecewiseLinear(std::move(xs), std::move(ys)), eta);
  });
}

CdfEnvelope read_envelope(const std::string& path) {
  const Json j = parse_file(path, "envelope");
  const Json& mode_json = member(j, "mode", path);
  CdfEnvelope::Mode mode;
  if (mode_json == "linear") {
    mode = CdfEnvelope::Mode::kLinear;
  } else if (mode_json == "loglog") {
    mode = CdfEnvelope::Mode::kLogLog;
  } else {
    throw ValidationError(path + ": mode must be \"linear\" or \"loglog\"");
  }
  std::vector<double> xs = number_list(j, "xs", path);
  std::vector<double> values = number_list(j, "values", path);
  return rebuild_with_path(path, [&] {
    return CdfEnvelope(std::move(xs), std::move(values), mode);
  });
}

TargetSpec read_target_spec(const std::string& path) {
  const Json j = parse_file(path, "target_spec");
  std::vector<Atom> atoms = atom_list(j, "atoms", path);
  std::vector<double> locations;
  std::vector<double> masses;
  for (const Atom& a : atoms) {
    locations.push_back(a.distance);
    masses.push_back(a.mass);
  }
  std::optional<PiecewiseLinear> continuous;
  const Json& density = member(j, "density", path);
  if (!density.is_null()) {
    std::vector<double> xs = number_list(density, "xs", path);
    std::vector<double> ys = number_list(density, "ys", path);
    continuous = rebuild_with_path(path, [&] {
      return PiecewiseLinear(std::move(xs), std::move(ys));
    });
  }
  return rebuild_with_path(path, [&] {
    return TargetSpec(std::move(locations), std::move(masses),
                      std::move(continuous));
  });
}

MixtureRecipe read_mixture_recipe(const std::string& path) {
  const Json j = parse_file(path, "mixture");
  const Json& levels_json = member(j, "levels", path);
  if (!levels_json.is_number_integer()) {
    throw ValidationError(path + ": field \"levels\" must be an integer");
  }
  const Json& density = member(j, "density", path);
  std::vector<double> xs = number_list(density, "xs", path);
  std::vector<double> ys = number_list(density, "ys", path);
  const double eta = number_field(density, "eta", path);
  TargetDensity f = rebuild_with_path(path, [&] {
    return TargetDensity(PiecewiseLinear(std::move(xs), std::move(ys)), eta);
  });
  return MixtureRecipe{std::move(f), levels_json.get<std::size_t>()};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("cannot write " + path);
  }
  out << content;
  if (!out) {
    throw ValidationError("write failed for " + path);
  }
}

std::string csv_xy(const std::vector<double>& xs, const std::vector<double>& ys,
                   bool header) {
  if (xs.size() != ys.size()) {
    throw ValidationError("csv columns must align");
  }
  std::string out;
  if (header) out += "x,value\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += format_double(xs[i]);
    out += ',';
    out += format_double(ys[i]);
    out += '\n';
  }
  return out;
}

std::string csv_covering(const std::vector<CoveringReport>& reports,
                         bool header) {
  std::string out;
  if (header) out += "eps,m_greedy,p_le_eps,verdict\n";
  for (const CoveringReport& r : reports) {
    out += format_double(r.eps);
    out += ',';
    out += std::to_string(r.m_greedy);
    out += ',';
    out += format_double(r.p_le_eps);
    out += ',';
    out += r.verdict ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string csv_matrix(const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const std::vector<double>& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> parse_eps_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      text.find(':', second + 1) != std::string::npos) {
    throw ValidationError("eps grid must be \"a:b:steps\"");
  }
  double a = 0.0;
  double b = 0.0;
  unsigned long long steps = 0;
  try {
    std::size_t used = 0;
    const std::string sa = text.substr(0, first);
    const std::string sb = text.substr(first + 1, second - first - 1);
    const std::string sc = text.substr(second + 1);
    a = std::stod(sa, &used);
    if (used != sa.size()) throw std::invalid_argument(sa);
    b = std::stod(sb, &used);
    if (used != sb.size()) throw std::invalid_argument(sb);
    steps = std::stoull(sc, &used);
    if (used != sc.size()) throw std::invalid_argument(sc);
  } catch (const std::exception&) {
    throw ValidationError("eps grid must be \"a:b:steps\" with numeric bounds");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || steps == 0) {
    throw ValidationError("eps grid needs finite bounds and at least one step");
  }
  if (steps == 1) return {a};
  if (!(a < b)) {
    throw ValidationError("eps grid needs a < b for more than one step");
  }
  return linspace(a, b, static_cast<std::size_t>(steps));
}

}  // namespace feasidist
