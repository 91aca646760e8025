// Copyright 2026 The qbu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBU_JSON_IO_HPP
#define QBU_JSON_IO_HPP

#include <optional>
#include <string>

#include "qbu/graphred.hpp"
#include "qbu/hilbert.hpp"
#include "qbu/matchperm.hpp"
#include "qbu/satcompile.hpp"

// File formats (all JSON; malformed input throws invalid_input):
//   observation set   {"d": int, "items": [{"v_re": [...], "v_im": [...], "mult": int}
//                                          | {"m_re": [[...]], "m_im": [[...]], "mult": int}]}
//   matrix            {"size": m, "rows": [[...]]}
//   graph             {"n": int, "edges": [[u, v, "num/den"], ...]}
//   sat instance      {"d": int, "clauses": [[a, b, c], ...]}
//   compiled sat      {"kind": "sat-mle"|"sat-qbu", constants, "observations": {...}}

namespace qbu {

ObservationSet load_observation_set(const std::string& path);
void save_observation_set(const ObservationSet& obs, const std::string& path);

Dense<double> load_matrix(const std::string& path);
void save_matrix(const Dense<double>& m, const std::string& path);

// Doubled matrices are validated on load.
DoubledMatrix load_doubled_matrix(const std::string& path);

WeightedDigraph load_graph(const std::string& path);
void save_graph(const WeightedDigraph& g, const std::string& path);

Mnae3SatInstance load_sat(const std::string& path);
void save_sat(const Mnae3SatInstance& inst, const std::string& path);

void save_compiled_mle(const CompiledMle& c, const std::string& path);
CompiledMle load_compiled_mle(const std::string& path);
void save_compiled_qbu(const CompiledQbu& c, const std::string& path);
CompiledQbu load_compiled_qbu(const std::string& path);

void save_plan(const ReductionPlan& plan, const std::string& path);

// Anything carrying an observation set, for `eval` commands: a plain
// observation-set file or a compiled sat instance.
struct LoadedInstance {
  ObservationSet obs;
  std::string kind;  // "observations", "sat-mle", "sat-qbu"
  std::optional<double> log_p;
};

LoadedInstance load_instance(const std::string& path);

// FNV-1a hash of the file bytes, used to bind reports to their inputs.
std::uint64_t file_hash(const std::string& path);

}  // namespace qbu

#endif  // QBU_JSON_IO_HPP
