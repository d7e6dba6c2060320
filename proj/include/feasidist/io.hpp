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

#ifndef FEASIDIST_IO_HPP
#define FEASIDIST_IO_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "feasidist/density_builder.hpp"
#include "feasidist/distributions.hpp"
#include "feasidist/dyadic.hpp"
#include "feasidist/feasibility.hpp"
#include "feasidist/mixture.hpp"
#include "feasidist/tree.hpp"

namespace feasidist {

// Versioned JSON artifacts ("schema": "feasidist/v1") and deterministic CSV
// emission: identical inputs always produce byte-identical text.  Readers
// validate the schema/kind pair and name the offending file in every error.

std::string json_text(const FiniteTarget& target);
std::string json_text(const TreeStructure& tree);
std::string json_text(const TargetDensity& density);
std::string json_text(const CdfEnvelope& envelope);
std::string json_text(const TargetSpec& spec);

// Full build artifact: parameters, the discrete intermediate target, the
// plan replay report, the graft's leading branching counts, and (when run)
// the domination certificate and sampling check.
std::string space_json_text(const CompositeSpace& space, const PlanCheck& plan,
                            const CertifyReport* certificate,
                            const double* pair_ks);

// Decomposition artifact: the original density plus per-level reports.  The
// level list is informational; readers re-derive the decomposition from the
// density and the level count, which is deterministic.
std::string mixture_json_text(const MixtureSpace& mixture);

FiniteTarget read_finite_target(const std::string& path);
TreeStructure read_tree(const std::string& path);
TargetDensity read_density(const std::string& path);
CdfEnvelope read_envelope(const std::string& path);
TargetSpec read_target_spec(const std::string& path);

struct MixtureRecipe {
  TargetDensity density;
  std::size_t levels = 0;
};
MixtureRecipe read_mixture_recipe(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Two-column CSV with an optional "x,value" header; %.17g round-trips.
std::string csv_xy(const std::vector<double>& xs, const std::vector<double>& ys,
                   bool header);
// Covering sweep rows: eps,m_greedy,p_le_eps,verdict (verdict as 0/1).
std::string csv_covering(const std::vector<CoveringReport>& reports, bool header);
// Dense numeric matrix, one row per line, no header.
std::string csv_matrix(const std::vector<std::vector<double>>& rows);

// "a:b:steps" -> steps evenly spaced values from a to b (a single value when
// steps is 1).
std::vector<double> parse_eps_grid(const std::string& text);

}  // namespace feasidist

#endif  // FEASIDIST_IO_HPP
