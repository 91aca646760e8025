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

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "qbu/errors.hpp"
#include "qbu/estimators.hpp"
#include "qbu/exact.hpp"
#include "qbu/graphred.hpp"
#include "qbu/json_io.hpp"
#include "qbu/matchperm.hpp"
#include "qbu/report.hpp"
#include "qbu/satcompile.hpp"
#include "qbu/sphere.hpp"
#include "qbu/verify.hpp"

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Exit codes: 0 success, 1 failed verification check, 2 invalid input,
// 3 resource guard.  Declared here so CI scripts have one place to read.
constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;

void emit(const Json& result, const std::string& out_path) {
  const std::string text = result.dump(2) + "\n";
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f || !(f << text))
    throw qbu::invalid_input("cannot write " + out_path);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CompileArgs {
  std::string in, out;
  double C = 2.0;
};

int run_compile_sat_mle(const CompileArgs& a) {
  const qbu::Mnae3SatInstance inst = qbu::load_sat(a.in);
  qbu::save_compiled_mle(qbu::compile_mle(inst, a.C), a.out);
  return kExitPass;
}

int run_compile_sat_qbu(const CompileArgs& a) {
  const qbu::Mnae3SatInstance inst = qbu::load_sat(a.in);
  qbu::save_compiled_qbu(qbu::compile_qbu(inst), a.out);
  return kExitPass;
}

int run_compile_graph_qbu(const CompileArgs& a) {
  const qbu::WeightedDigraph g = qbu::load_graph(a.in);
  qbu::save_plan(qbu::compile_dcc_to_qbu(g), a.out);
  return kExitPass;
}

struct EvalArgs {
  std::string in, out;
  std::string method = "exact";
  std::string convention = "normalized";
  long long samples = 1000000;
  std::uint64_t seed = 1;
  int restarts = 64;
  int threads = 1;
};

std::string eval_command_echo(const std::string& sub, const EvalArgs& a) {
  std::string cmd = "eval " + sub + " --in " + a.in;
  if (sub == "pnorm") {
    cmd += " --method " + a.method + " --convention " + a.convention;
    if (a.method == "mc")
      cmd += " --samples " + std::to_string(a.samples) + " --seed " + std::to_string(a.seed);
  } else if (sub == "mle") {
    cmd += " --restarts " + std::to_string(a.restarts) + " --seed " + std::to_string(a.seed);
  }
  return cmd;
}

int run_eval_pnorm(const EvalArgs& a) {
  const auto start = Clock::now();
  const qbu::LoadedInstance inst = qbu::load_instance(a.in);
  const bool raw = a.convention == "raw";
  if (!raw && a.convention != "normalized")
    throw qbu::invalid_input("unknown convention: " + a.convention);

  Json r;
  r["command"] = eval_command_echo("pnorm", a);
  r["config_hash"] = qbu::file_hash(a.in);
  r["instance_kind"] = inst.kind;
  r["method"] = a.method;
  r["convention"] = a.convention;

  const double area = qbu::sphere_area(2 * inst.obs.dim()).value();
  if (a.method == "exact") {
    const auto p = qbu::pnorm_exact(
        inst.obs, raw ? qbu::Convention::raw : qbu::Convention::normalized);
    r["value"] = p.value;
    if (p.exact) {
      r["exact_coeff"] = qbu::rat_to_string(p.exact->coeff);
      r["exact_pi_power"] = p.exact->pi_power;
    }
  } else if (a.method == "mc") {
    const auto mc = qbu::pnorm_montecarlo(inst.obs, a.samples, a.seed, a.threads);
    // The estimator targets the Haar mean; the raw convention rescales by the
    // sphere area.
    const double scale = raw ? area : 1.0;
    r["estimate"] = mc.estimate * scale;
    r["std_error"] = mc.std_error * scale;
    r["samples"] = mc.samples;
    r["seed"] = a.seed;
  } else if (a.method == "pairings") {
    // Raw-convention pairing formula; its relation to the surface integral is
    // measured by the verify suites, not assumed.
    const double value = qbu::pnorm_via_pairings(inst.obs);
    r["value"] = raw ? value : value / area;
    r["note"] = "pairing formula; compare against method=exact before trusting";
  } else {
    throw qbu::invalid_input("unknown method: " + a.method);
  }
  r["wall_time_seconds"] = seconds_since(start);
  emit(r, a.out);
  return kExitPass;
}

int run_eval_mle(const EvalArgs& a) {
  const auto start = Clock::now();
  const qbu::LoadedInstance inst = qbu::load_instance(a.in);
  const qbu::MleResult best =
      qbu::maximize_likelihood(inst.obs, a.restarts, a.seed);

  Json r;
  r["command"] = eval_command_echo("mle", a);
  r["config_hash"] = qbu::file_hash(a.in);
  r["instance_kind"] = inst.kind;
  r["restarts"] = a.restarts;
  r["restarts_used"] = best.restarts_used;
  r["seed"] = a.seed;
  r["log_likelihood"] = best.log_likelihood;
  if (inst.log_p) {
    r["promised_log_p"] = *inst.log_p;
    r["margin_over_promise"] = best.log_likelihood - *inst.log_p;
  }
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < best.state.dim(); ++i) {
    re.push_back(best.state.vector()[i].real());
    im.push_back(best.state.vector()[i].imag());
  }
  r["state_re"] = re;
  r["state_im"] = im;
  r["wall_time_seconds"] = seconds_since(start);
  emit(r, a.out);
  return kExitPass;
}

int run_eval_rho(const EvalArgs& a) {
  const auto start = Clock::now();
  const qbu::LoadedInstance inst = qbu::load_instance(a.in);
  const qbu::DensityMatrix rho = qbu::rho_avg(inst.obs);

  Json r;
  r["command"] = eval_command_echo("rho", a);
  r["config_hash"] = qbu::file_hash(a.in);
  r["instance_kind"] = inst.kind;
  r["convention"] = "normalized";
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < rho.dim(); ++i) {
    Json rrow = Json::array(), irow = Json::array();
    for (int j = 0; j < rho.dim(); ++j) {
      rrow.push_back(rho.matrix()(i, j).real());
      irow.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  r["rho_re"] = re;
  r["rho_im"] = im;
  r["pnorm_from_rho"] = qbu::pnorm_from_rho_avg(inst.obs);
  r["wall_time_seconds"] = seconds_since(start);
  emit(r, a.out);
  return kExitPass;
}

struct VerifyArgs {
  std::string suite, out;
  qbu::VerifyOptions opts;
};

int run_verify(const VerifyArgs& a) {
  if (a.suite.empty())
    throw qbu::invalid_input(
        "no suite named (expected constants, oracles, lemmas, graph-chain, end-to-end)");

  const qbu::RunReport report = qbu::run_suite(a.suite, a.opts);
  for (const auto& c : report.checks) {
    const char* tag = c.status == qbu::CheckStatus::pass
                          ? "PASS"
                          : (c.status == qbu::CheckStatus::fail ? "FAIL" : "SKIP");
    std::fprintf(stderr, "[%s] %s\n", tag, c.name.c_str());
  }
  std::fprintf(stderr, "%s: %d checks, %d failed\n", a.suite.c_str(),
               static_cast<int>(report.checks.size()), report.fail_count());

  const std::string text = qbu::report_to_json(report);
  if (a.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    qbu::save_report(report, a.out);
  }
  return report.all_passed() ? kExitPass : kExitCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observation-set compiler and exact/Monte Carlo evaluator"};
  app.require_subcommand(1);

  CompileArgs cargs;
  EvalArgs eargs;
  VerifyArgs vargs;
  int command = 0;

  CLI::App* compile = app.add_subcommand("compile", "Compile instances to JSON");
  compile->require_subcommand(1);
  CLI::App* sat_mle = compile->add_subcommand("sat-mle", "Satisfiability-threshold instance");
  sat_mle->add_option("--in", cargs.in, "Sat instance JSON")->required();
  sat_mle->add_option("--out", cargs.out, "Compiled instance path")->required();
  sat_mle->add_option("--C", cargs.C, "Promised likelihood ratio (> 1)")->required();
  sat_mle->callback([&] { command = 1; });
  CLI::App* sat_qbu = compile->add_subcommand("sat-qbu", "Counting-threshold instance");
  sat_qbu->add_option("--in", cargs.in, "Sat instance JSON")->required();
  sat_qbu->add_option("--out", cargs.out, "Compiled instance path")->required();
  sat_qbu->callback([&] { command = 2; });
  CLI::App* graph_qbu = compile->add_subcommand("graph-qbu", "Cycle-cover reduction plan");
  graph_qbu->add_option("--in", cargs.in, "Graph JSON")->required();
  graph_qbu->add_option("--out", cargs.out, "Plan path")->required();
  graph_qbu->callback([&] { command = 3; });

  CLI::App* eval = app.add_subcommand("eval", "Evaluate an instance");
  eval->require_subcommand(1);
  CLI::App* pnorm = eval->add_subcommand("pnorm", "Posterior normalizing constant");
  pnorm->add_option("--in", eargs.in, "Instance JSON")->required();
  pnorm->add_option("--out", eargs.out, "Result path (stdout when absent)");
  pnorm->add_option("--method", eargs.method, "exact | mc | pairings");
  pnorm->add_option("--convention", eargs.convention, "raw | normalized");
  pnorm->add_option("--samples", eargs.samples, "Monte Carlo samples");
  pnorm->add_option("--seed", eargs.seed, "Monte Carlo seed");
  pnorm->add_option("--threads", eargs.threads, "Worker cap");
  pnorm->callback([&] { command = 4; });
  CLI::App* mle = eval->add_subcommand("mle", "Likelihood search");
  mle->add_option("--in", eargs.in, "Instance JSON")->required();
  mle->add_option("--out", eargs.out, "Result path (stdout when absent)");
  mle->add_option("--restarts", eargs.restarts, "Random restarts");
  mle->add_option("--seed", eargs.seed, "Search seed");
  mle->callback([&] { command = 5; });
  CLI::App* rho = eval->add_subcommand("rho", "Posterior mean state");
  rho->add_option("--in", eargs.in, "Instance JSON")->required();
  rho->add_option("--out", eargs.out, "Result path (stdout when absent)");
  rho->callback([&] { command = 6; });

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite,--suite", vargs.suite,
                     "constants | oracles | lemmas | graph-chain | end-to-end");
  verify->add_option("--out", vargs.out, "Report path (stdout when absent)");
  verify->add_option("--seed", vargs.opts.seed, "Suite seed");
  verify->add_option("--threads", vargs.opts.threads, "Worker cap");
  verify->add_option("--d", vargs.opts.lemma_d, "Lemma sweep dimension");
  verify->add_option("--samples", vargs.opts.lemma_samples, "Lemma sweep size");
  verify->callback([&] { command = 7; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }

  try {
    switch (command) {
      case 1: return run_compile_sat_mle(cargs);
      case 2: return run_compile_sat_qbu(cargs);
      case 3: return run_compile_graph_qbu(cargs);
      case 4: return run_eval_pnorm(eargs);
      case 5: return run_eval_mle(eargs);
      case 6: return run_eval_rho(eargs);
      case 7: return run_verify(vargs);
    }
  } catch (const qbu::invalid_input& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const qbu::resource_limit& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  } catch (const qbu::conditioning_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitResource;
  }
  return kExitPass;
}
