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

#include "qbu/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "qbu/errors.hpp"
#include "qbu/report.hpp"

namespace qbu {

namespace {

using Json = nlohmann::ordered_json;

void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_input(what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw invalid_input("read failed: " + path);
  return buf.str();
}

Json parse_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw invalid_input("malformed JSON in " + path + ": " + e.what());
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw invalid_input("write failed: " + path);
}

// Semantic checks below throw invalid_input directly; this wrapper converts
// the structural failures nlohmann raises (missing key, wrong type) so every
// malformed file surfaces the same way.
template <typename F>
auto translating(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw invalid_input("malformed content in " + path + ": " + e.what());
  }
}

std::vector<double> number_row(const Json& j, int want, const std::string& what) {
  require(j.is_array() && static_cast<int>(j.size()) == want,
          what + ": expected an array of " + std::to_string(want) + " numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    require(x.is_number(), what + ": non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

Json obs_to_json(const ObservationSet& obs) {
  Json j;
  j["d"] = obs.dim();
  j["items"] = Json::array();
  for (const auto& item : obs.items()) {
    Json ji;
    if (item.obs.kind() == Observation::Kind::rank_one) {
      const CVec& v = item.obs.vector();
      Json re = Json::array(), im = Json::array();
      for (int k = 0; k < v.size(); ++k) {
        re.push_back(v[k].real());
        im.push_back(v[k].imag());
      }
      ji["v_re"] = std::move(re);
      ji["v_im"] = std::move(im);
      if (item.obs.exact) {
        Json ere = Json::array(), eim = Json::array();
        for (const auto& g : item.obs.exact->entries) {
          ere.push_back(rat_to_string(g.re));
          eim.push_back(rat_to_string(g.im));
        }
        ji["exact_re"] = std::move(ere);
        ji["exact_im"] = std::move(eim);
      }
    } else {
      const CMat m = item.obs.matrix();
      Json re = Json::array(), im = Json::array();
      for (int r = 0; r < m.rows(); ++r) {
        Json rre = Json::array(), rim = Json::array();
        for (int c = 0; c < m.cols(); ++c) {
          rre.push_back(m(r, c).real());
          rim.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rre));
        im.push_back(std::move(rim));
      }
      ji["m_re"] = std::move(re);
      ji["m_im"] = std::move(im);
    }
    ji["mult"] = item.multiplicity;
    j["items"].push_back(std::move(ji));
  }
  return j;
}

ObservationSet obs_from_json(const Json& j, const std::string& where) {
  require(j.is_object() && j.contains("d") && j["d"].is_number_integer(),
          where + ": missing integer field 'd'");
  const int d = j["d"].get<int>();
  require(d >= 1, where + ": d must be positive");
  require(j.contains("items") && j["items"].is_array(),
          where + ": missing array field 'items'");

  ObservationSet set(d);
  int index = 0;
  for (const auto& ji : j["items"]) {
    const std::string tag = where + " item " + std::to_string(index++);
    require(ji.is_object(), tag + ": expected an object");
    long long mult = 1;
    if (ji.contains("mult")) {
      require(ji["mult"].is_number_integer(), tag + ": 'mult' must be an integer");
      mult = ji["mult"].get<long long>();
      require(mult >= 1, tag + ": 'mult' must be positive");
    }
    const bool has_vec = ji.contains("v_re");
    const bool has_mat = ji.contains("m_re");
    require(has_vec != has_mat, tag + ": need exactly one of 'v_re' or 'm_re'");

    if (has_vec) {
      const auto re = number_row(ji["v_re"], d, tag + " v_re");
      std::vector<double> im(d, 0.0);
      if (ji.contains("v_im")) im = number_row(ji["v_im"], d, tag + " v_im");
      CVec v(d);
      for (int k = 0; k < d; ++k) v[k] = Complex(re[k], im[k]);
      Observation obs = Observation::rank_one(v);

      require(ji.contains("exact_re") == ji.contains("exact_im"),
              tag + ": 'exact_re' and 'exact_im' go together");
      if (ji.contains("exact_re")) {
        const auto& ere = ji["exact_re"];
        const auto& eim = ji["exact_im"];
        require(ere.is_array() && eim.is_array() && static_cast<int>(ere.size()) == d &&
                    static_cast<int>(eim.size()) == d,
                tag + ": exact entries must be arrays of " + std::to_string(d) + " strings");
        ExactVector ev;
        ev.entries.reserve(d);
        for (int k = 0; k < d; ++k) {
          require(ere[k].is_string() && eim[k].is_string(),
                  tag + ": exact entries must be rational strings");
          ev.entries.push_back(
              {rat_from_string(ere[k].get<std::string>()),
               rat_from_string(eim[k].get<std::string>())});
        }
        const Rat n2 = ev.norm2();
        require(n2 != 0, tag + ": exact vector is zero");
        // The exact form must point the same way as the float vector.
        Complex dot = 0.0;
        double en2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const Complex ek(rat_to_double(ev.entries[k].re), rat_to_double(ev.entries[k].im));
          dot += std::conj(obs.vector()[k]) * ek;
          en2 += std::norm(ek);
        }
        require(std::abs(std::norm(dot) / en2 - 1.0) <= 1e-9,
                tag + ": exact entries disagree with the stored vector");
        obs.exact = std::move(ev);
      }
      set.add(std::move(obs), mult);
    } else {
      const auto& mre = ji["m_re"];
      require(mre.is_array() && static_cast<int>(mre.size()) == d,
              tag + ": m_re must be a " + std::to_string(d) + " row matrix");
      CMat m = CMat::Zero(d, d);
      for (int r = 0; r < d; ++r) {
        const auto row = number_row(mre[r], d, tag + " m_re row");
        for (int c = 0; c < d; ++c) m(r, c) = row[c];
      }
      if (ji.contains("m_im")) {
        const auto& mim = ji["m_im"];
        require(mim.is_array() && static_cast<int>(mim.size()) == d,
                tag + ": m_im must be a " + std::to_string(d) + " row matrix");
        for (int r = 0; r < d; ++r) {
          const auto row = number_row(mim[r], d, tag + " m_im row");
          for (int c = 0; c < d; ++c) m(r, c) += Complex(0.0, row[c]);
        }
      }
      set.add(Observation::general(m), mult);
    }
  }
  return set;
}

Json graph_to_json(const WeightedDigraph& g) {
  Json j;
  j["n"] = g.n;
  j["edges"] = Json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back(Json::array({e.from, e.to, rat_to_string(e.weight)}));
  return j;
}

WeightedDigraph graph_from_json(const Json& j, const std::string& where) {
  require(j.is_object() && j.contains("n") && j["n"].is_number_integer(),
          where + ": missing integer field 'n'");
  WeightedDigraph g;
  g.n = j["n"].get<int>();
  require(g.n >= 0, where + ": n must be nonnegative");
  require(j.contains("edges") && j["edges"].is_array(),
          where + ": missing array field 'edges'");
  int index = 0;
  for (const auto& je : j["edges"]) {
    const std::string tag = where + " edge " + std::to_string(index++);
    require(je.is_array() && (je.size() == 2 || je.size() == 3),
            tag + ": expected [from, to] or [from, to, weight]");
    require(je[0].is_number_integer() && je[1].is_number_integer(),
            tag + ": endpoints must be integers");
    GraphEdge e;
    e.from = je[0].get<int>();
    e.to = je[1].get<int>();
    if (je.size() == 3) {
      if (je[2].is_string()) {
        e.weight = rat_from_string(je[2].get<std::string>());
      } else if (je[2].is_number_integer()) {
        e.weight = Rat(je[2].get<long long>());
      } else {
        throw invalid_input(tag + ": weight must be an integer or a 'p/q' string");
      }
    }
    g.edges.push_back(std::move(e));
  }
  g.validate();
  return g;
}

Json rat_matrix_to_json(const RatMatrix& m) {
  Json j;
  j["size"] = m.rows();
  j["rows"] = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m(r, c)));
    j["rows"].push_back(std::move(row));
  }
  return j;
}

// p^(k1 d^2) with p = 1/d, times (32 / 27 d^3)^(k2 m), all to the reps power.
// Matches what compilation produces, so a stored log_p can be cross-checked.
FactoredRational rebuild_solution_likelihood(int d, long long k1, long long k2,
                                             int clause_count, long long reps) {
  const BigInt bd(d);
  FactoredRational p = FactoredRational::from_rat(Rat(1, d));
  p.pow(BigInt(k1) * d * d);
  if (clause_count > 0) {
    FactoredRational f = FactoredRational::from_rat(Rat(BigInt(32), 27 * bd * bd * bd));
    f.pow(BigInt(k2) * clause_count);
    p.mul(f);
  }
  p.pow(BigInt(reps));
  return p;
}

struct CompiledCommon {
  int d = 0;
  long long k1 = 0, k2 = 0;
  int clause_count = 0;
  long long reps = 1;
  double log_p = 0.0;
  ObservationSet obs;
  FactoredRational p_exact;
};

long long positive_ll(const Json& j, const char* key, const std::string& where) {
  require(j.contains(key) && j[key].is_number_integer(),
          where + ": missing integer field '" + key + "'");
  const long long v = j[key].get<long long>();
  require(v >= 1, where + ": '" + std::string(key) + "' must be positive");
  return v;
}

CompiledCommon compiled_common_from_json(const Json& j, const std::string& where) {
  CompiledCommon c;
  require(j.contains("d") && j["d"].is_number_integer(), where + ": missing integer field 'd'");
  c.d = j["d"].get<int>();
  require(c.d >= 3, where + ": d must be at least 3");
  c.k1 = positive_ll(j, "K1", where);
  c.k2 = positive_ll(j, "K2", where);
  require(j.contains("clause_count") && j["clause_count"].is_number_integer(),
          where + ": missing integer field 'clause_count'");
  c.clause_count = j["clause_count"].get<int>();
  require(c.clause_count >= 0, where + ": clause_count must be nonnegative");
  c.reps = j.contains("reps") ? positive_ll(j, "reps", where) : 1;
  require(j.contains("log_p") && j["log_p"].is_number(),
          where + ": missing numeric field 'log_p'");
  c.log_p = j["log_p"].get<double>();
  require(j.contains("observations"), where + ": missing field 'observations'");
  c.obs = obs_from_json(j["observations"], where + " observations");

  require(c.obs.dim() == c.d, where + ": observation dimension disagrees with d");
  const long long basic = static_cast<long long>(c.d) * c.d;
  const long long want_items = basic + 3ll * c.clause_count;
  require(static_cast<long long>(c.obs.items().size()) == want_items,
          where + ": expected " + std::to_string(want_items) + " observation items");
  for (long long i = 0; i < want_items; ++i) {
    const long long want_mult = (i < basic ? c.k1 : c.k2) * c.reps;
    require(c.obs.items()[static_cast<std::size_t>(i)].multiplicity == want_mult,
            where + ": item " + std::to_string(i) + " multiplicity disagrees with K1/K2/reps");
  }

  // The stored double is kept (round-trips are bitwise); the rebuild pins it
  // to the constants, with slack for the last-ulp difference between scaling
  // a log and taking the log of a power.
  c.p_exact = rebuild_solution_likelihood(c.d, c.k1, c.k2, c.clause_count, c.reps);
  const double log_check = c.p_exact.log();
  require(std::abs(log_check - c.log_p) <= 1e-9 * std::max(1.0, std::abs(log_check)),
          where + ": log_p disagrees with the stored constants");
  return c;
}

Json compiled_common_to_json(const char* kind, int d, long long k1, long long k2,
                             int clause_count, long long reps, double log_p,
                             const ObservationSet& obs) {
  Json j;
  j["kind"] = kind;
  j["d"] = d;
  j["K1"] = k1;
  j["K2"] = k2;
  j["clause_count"] = clause_count;
  j["reps"] = reps;
  j["log_p"] = log_p;
  j["observations"] = obs_to_json(obs);
  return j;
}

}  // namespace

ObservationSet load_observation_set(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] { return obs_from_json(j, path); });
}

void save_observation_set(const ObservationSet& obs, const std::string& path) {
  write_file(path, obs_to_json(obs));
}

Dense<double> load_matrix(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] {
    require(j.is_object() && j.contains("size") && j["size"].is_number_integer(),
            path + ": missing integer field 'size'");
    const int m = j["size"].get<int>();
    require(m >= 0, path + ": size must be nonnegative");
    require(j.contains("rows") && j["rows"].is_array() &&
                static_cast<int>(j["rows"].size()) == m,
            path + ": 'rows' must hold " + std::to_string(m) + " rows");
    Dense<double> out(m, m);
    for (int r = 0; r < m; ++r) {
      const auto row = number_row(j["rows"][r], m, path + " row " + std::to_string(r));
      for (int c = 0; c < m; ++c) out(r, c) = row[c];
    }
    return out;
  });
}

void save_matrix(const Dense<double>& m, const std::string& path) {
  require(m.rows() == m.cols(), "save_matrix: matrix must be square");
  Json j;
  j["size"] = m.rows();
  j["rows"] = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j["rows"].push_back(std::move(row));
  }
  write_file(path, j);
}

DoubledMatrix load_doubled_matrix(const std::string& path) {
  return DoubledMatrix(load_matrix(path));
}

WeightedDigraph load_graph(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] { return graph_from_json(j, path); });
}

void save_graph(const WeightedDigraph& g, const std::string& path) {
  write_file(path, graph_to_json(g));
}

Mnae3SatInstance load_sat(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] {
    require(j.is_object() && j.contains("d") && j["d"].is_number_integer(),
            path + ": missing integer field 'd'");
    Mnae3SatInstance inst;
    inst.d = j["d"].get<int>();
    require(j.contains("clauses") && j["clauses"].is_array(),
            path + ": missing array field 'clauses'");
    int index = 0;
    for (const auto& jc : j["clauses"]) {
      const std::string tag = path + " clause " + std::to_string(index++);
      require(jc.is_array() && jc.size() == 3, tag + ": expected [a, b, c]");
      std::array<int, 3> clause{};
      for (int k = 0; k < 3; ++k) {
        require(jc[k].is_number_integer(), tag + ": variables must be integers");
        clause[static_cast<std::size_t>(k)] = jc[k].get<int>();
      }
      inst.clauses.push_back(clause);
    }
    inst.validate();
    return inst;
  });
}

void save_sat(const Mnae3SatInstance& inst, const std::string& path) {
  inst.validate();
  Json j;
  j["d"] = inst.d;
  j["clauses"] = Json::array();
  for (const auto& c : inst.clauses) j["clauses"].push_back(Json::array({c[0], c[1], c[2]}));
  write_file(path, j);
}

void save_compiled_mle(const CompiledMle& c, const std::string& path) {
  Json j = compiled_common_to_json("sat-mle", c.d, c.k1, c.k2, c.clause_count, c.reps,
                                   c.log_p, c.obs);
  j["C"] = c.gap;
  write_file(path, j);
}

CompiledMle load_compiled_mle(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] {
    require(j.is_object() && j.value("kind", "") == "sat-mle",
            path + ": expected kind 'sat-mle'");
    CompiledCommon common = compiled_common_from_json(j, path);
    require(j.contains("C") && j["C"].is_number(), path + ": missing numeric field 'C'");
    const double gap = j["C"].get<double>();
    require(gap > 1.0, path + ": C must exceed 1");
    CompiledMle out;
    out.obs = std::move(common.obs);
    out.d = common.d;
    out.k1 = common.k1;
    out.k2 = common.k2;
    out.gap = gap;
    out.clause_count = common.clause_count;
    out.reps = common.reps;
    out.log_p = common.log_p;
    out.p_exact = std::move(common.p_exact);
    return out;
  });
}

void save_compiled_qbu(const CompiledQbu& c, const std::string& path) {
  Json j = compiled_common_to_json("sat-qbu", c.d, c.k1, c.k2, c.clause_count, c.reps,
                                   c.log_p, c.obs);
  j["eps_g"] = rat_to_string(c.eps_g);
  j["overridden"] = c.overridden;
  write_file(path, j);
}

CompiledQbu load_compiled_qbu(const std::string& path) {
  const Json j = parse_file(path);
  return translating(path, [&] {
    require(j.is_object() && j.value("kind", "") == "sat-qbu",
            path + ": expected kind 'sat-qbu'");
    CompiledCommon common = compiled_common_from_json(j, path);
    require(j.contains("eps_g") && j["eps_g"].is_string(),
            path + ": missing string field 'eps_g'");
    const Rat eps_g = rat_from_string(j["eps_g"].get<std::string>());
    const BigInt bd(common.d);
    const Rat formula(BigInt(1), BigInt(2400) * ipow(bd, 9) * (1 + bd));
    require(eps_g == formula, path + ": eps_g disagrees with d");
    CompiledQbu out;
    out.obs = std::move(common.obs);
    out.d = common.d;
    out.k1 = common.k1;
    out.k2 = common.k2;
    out.eps_g = eps_g;
    out.clause_count = common.clause_count;
    out.overridden = j.value("overridden", false);
    out.reps = common.reps;
    out.log_p = common.log_p;
    out.p_exact = std::move(common.p_exact);
    return out;
  });
}

void save_plan(const ReductionPlan& plan, const std::string& path) {
  const auto profile_json = [](const FlowProfile& p) {
    return Json::array({p.f0.str(), p.f1.str(), p.f2.str()});
  };
  const auto weighted_json = [](const WeightedFlowProfile& p) {
    return Json::array({rat_to_string(p.f0), rat_to_string(p.f1), rat_to_string(p.f2)});
  };
  const char* eval_name = "combinatorial";
  if (plan.chain_eval == ChainEval::extraction) eval_name = "extraction";
  if (plan.chain_eval == ChainEval::doubled_permanent) eval_name = "doubled-permanent";

  Json j;
  j["original"] = graph_to_json(plan.original);
  Json jg;
  jg["edge_mask"] = plan.gadget.edge_mask;
  jg["s"] = plan.gadget.s;
  jg["t"] = plan.gadget.t;
  jg["graph"] = graph_to_json(plan.gadget.graph);
  jg["profile"] = profile_json(plan.gadget.profile);
  jg["weighted_profile"] = weighted_json(plan.gadget_weighted);
  j["gadget"] = std::move(jg);
  j["links_per_vertex"] = plan.links_per_vertex;
  j["total_links"] = plan.total_links;
  j["floored_recovery_valid"] = plan.floored_recovery_valid;
  j["remainder"] = plan.remainder.str();
  j["remainder_weighted"] = rat_to_string(plan.remainder_weighted);
  j["unit_factor_weighted"] = rat_to_string(plan.unit_factor_weighted);
  j["chained"] = graph_to_json(plan.chained);
  j["chain_eval"] = eval_name;
  j["doubled_original"] = graph_to_json(plan.doubled_original);
  j["biadjacency"] = rat_matrix_to_json(plan.biadjacency);
  j["qbu_matrix"] = rat_matrix_to_json(plan.qbu_matrix);
  j["alpha_max"] = rat_to_string(plan.alpha_max);
  j["recipe"] = plan.recipe;
  write_file(path, j);
}

LoadedInstance load_instance(const std::string& path) {
  const Json j = parse_file(path);
  require(j.is_object(), path + ": expected a JSON object");
  const std::string kind = translating(path, [&] { return j.value("kind", ""); });
  LoadedInstance out;
  if (kind == "sat-mle") {
    CompiledMle c = load_compiled_mle(path);
    out.obs = std::move(c.obs);
    out.kind = "sat-mle";
    out.log_p = c.log_p;
  } else if (kind == "sat-qbu") {
    CompiledQbu c = load_compiled_qbu(path);
    out.obs = std::move(c.obs);
    out.kind = "sat-qbu";
    out.log_p = c.log_p;
  } else if (kind.empty() && j.contains("items")) {
    out.obs = load_observation_set(path);
    out.kind = "observations";
  } else {
    throw invalid_input(path + ": not an observation set or compiled instance");
  }
  return out;
}

std::uint64_t file_hash(const std::string& path) {
  const std::string bytes = read_file(path);
  return fnv1a(bytes.data(), bytes.size());
}

}  // namespace qbu
