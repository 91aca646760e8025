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

#include "qbu/satcompile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "qbu/errors.hpp"

namespace qbu {

namespace {

long long ceil_positive(double x, const char* what) {
  if (!(x > 0.0) || x > 9.0e17) throw invalid_input(std::string(what) + ": constant out of range");
  return static_cast<long long>(std::ceil(x));
}

// k1 copies of every basic observation, then k2 copies of each clause triple,
// clause occurrences kept in instance order.
ObservationSet build_observations(const Mnae3SatInstance& inst, long long k1, long long k2) {
  ObservationSet obs(inst.d);
  const ObservationSet basic = basic_observation_set(inst.d);
  for (const auto& it : basic.items()) obs.add(it.obs, k1);
  for (const auto& clause : inst.clauses) {
    auto triple = clause_observations(clause, inst.d);
    for (auto& o : triple) obs.add(std::move(o), k2);
  }
  return obs;
}

// d^(-k1 d^2) * (32/(27 d^3))^(k2 * clause_count): the likelihood a solution
// state earns from the compiled set.
FactoredRational solution_likelihood(int d, long long k1, long long k2, long long clause_count) {
  FactoredRational p = FactoredRational::from_rat(Rat(1, d));
  p.pow(BigInt(k1) * d * d);
  if (clause_count > 0) {
    FactoredRational per_clause =
        FactoredRational::from_rat(Rat(BigInt(32), BigInt(27) * d * d * d));
    per_clause.pow(BigInt(k2) * clause_count);
    p.mul(per_clause);
  }
  return p;
}

void require_compilable(const Mnae3SatInstance& inst, const char* what) {
  inst.validate();
  if (inst.d < 3) throw invalid_input(std::string(what) + ": need dimension at least 3");
}

}  // namespace

void Mnae3SatInstance::validate() const {
  if (d < 1) throw invalid_input("sat instance: dimension must be positive");
  for (const auto& c : clauses) {
    for (int v : c)
      if (v < 1 || v > d) throw invalid_input("sat instance: variable index out of range");
    if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2])
      throw invalid_input("sat instance: clause variables must be distinct");
  }
}

std::array<Observation, 3> clause_observations(const std::array<int, 3>& clause, int d) {
  if (d < 3) throw invalid_input("clause_observations: need dimension at least 3");
  for (int v : clause)
    if (v < 1 || v > d) throw invalid_input("clause_observations: variable index out of range");
  if (clause[0] == clause[1] || clause[1] == clause[2] || clause[0] == clause[2])
    throw invalid_input("clause_observations: clause variables must be distinct");
  auto make = [&](int r) {
    const int a = clause[r] - 1;
    const int b = clause[(r + 1) % 3] - 1;
    const int c = clause[(r + 2) % 3] - 1;
    CVec v = CVec::Zero(d);
    v(a) = 1.0;
    v(b) = 1.0;
    v(c) = -2.0;
    Observation o = Observation::rank_one(v);
    ExactVector ev;
    ev.entries.assign(d, GaussRat{});
    ev.entries[a] = GaussRat{Rat(1), Rat(0)};
    ev.entries[b] = GaussRat{Rat(1), Rat(0)};
    ev.entries[c] = GaussRat{Rat(-2), Rat(0)};
    o.exact = std::move(ev);
    return o;
  };
  return {make(0), make(1), make(2)};
}

CompiledMle compile_mle(const Mnae3SatInstance& inst, double C) {
  require_compilable(inst, "compile_mle");
  if (!(C > 1.0)) throw invalid_input("compile_mle: promise gap C must exceed 1");
  const int d = inst.d;
  const double df = static_cast<double>(d);
  CompiledMle out;
  out.d = d;
  out.k1 = ceil_positive(1200.0 * df * df * df * df * df * std::log(C), "compile_mle k1");
  out.k2 = ceil_positive(2.0 * std::log(C) / (3.0 * std::log(df)), "compile_mle k2");
  out.gap = C;
  out.clause_count = static_cast<int>(inst.clauses.size());
  out.obs = build_observations(inst, out.k1, out.k2);
  out.p_exact = solution_likelihood(d, out.k1, out.k2, out.clause_count);
  out.log_p = out.p_exact.log();
  return out;
}

CompiledQbu compile_qbu(const Mnae3SatInstance& inst, const std::optional<QbuOverrides>& overrides) {
  require_compilable(inst, "compile_qbu");
  const int d = inst.d;
  CompiledQbu out;
  out.d = d;
  if (overrides) {
    if (overrides->k1 < 1 || overrides->k2 < 1)
      throw invalid_input("compile_qbu: overridden counts must be at least 1");
    out.k1 = overrides->k1;
    out.k2 = overrides->k2;
    out.overridden = true;
  } else {
    const double df = static_cast<double>(d);
    out.k1 = ceil_positive(1200.0 * df * df * df * df * df * df * df * std::log(df),
                           "compile_qbu k1");
    out.k2 = (2LL * d * d + 2) / 3;
  }
  out.eps_g = Rat(BigInt(1), BigInt(2400) * ipow(BigInt(d), 9) * (1 + d));
  out.clause_count = static_cast<int>(inst.clauses.size());
  out.obs = build_observations(inst, out.k1, out.k2);
  out.p_exact = solution_likelihood(d, out.k1, out.k2, out.clause_count);
  out.log_p = out.p_exact.log();
  return out;
}

namespace {

ObservationSet scale_multiplicities(const ObservationSet& obs, long long reps) {
  ObservationSet out(obs.dim());
  for (const auto& it : obs.items()) out.add(it.obs, it.multiplicity * reps);
  return out;
}

}  // namespace

CompiledMle amplify(const CompiledMle& c, long long reps) {
  if (reps < 1) throw invalid_input("amplify: reps must be at least 1");
  if (reps == 1) return c;
  CompiledMle out = c;
  out.obs = scale_multiplicities(c.obs, reps);
  out.reps = c.reps * reps;
  out.log_p = c.log_p * static_cast<double>(reps);
  out.p_exact.pow(BigInt(reps));
  out.gap = std::pow(c.gap, static_cast<double>(reps));
  return out;
}

CompiledQbu amplify(const CompiledQbu& c, long long reps) {
  if (reps < 1) throw invalid_input("amplify: reps must be at least 1");
  if (reps == 1) return c;
  CompiledQbu out = c;
  out.obs = scale_multiplicities(c.obs, reps);
  out.reps = c.reps * reps;
  out.log_p = c.log_p * static_cast<double>(reps);
  out.p_exact.pow(BigInt(reps));
  return out;
}

NaeResult nae_eval(const SignVector& assignment, const Mnae3SatInstance& inst) {
  inst.validate();
  if (assignment.dim() != inst.d) throw invalid_input("nae_eval: assignment length mismatch");
  NaeResult r;
  for (std::size_t i = 0; i < inst.clauses.size(); ++i) {
    const auto& c = inst.clauses[i];
    const int sa = assignment.signs[c[0] - 1];
    const int sb = assignment.signs[c[1] - 1];
    const int sc = assignment.signs[c[2] - 1];
    if (sa == sb && sb == sc) r.violated.push_back(static_cast<int>(i));
  }
  r.satisfied = r.violated.empty();
  return r;
}

std::vector<B0Entry> enumerate_b0(const ObservationSet& obs) {
  const int d = obs.dim();
  if (d < 1) throw invalid_input("enumerate_b0: observation set has no dimension");
  if (d > 20) throw resource_limit("enumerate_b0: dimension capped at 20");
  if (!obs.all_exact())
    throw invalid_input("enumerate_b0: every observation needs exact vector data");
  std::vector<B0Entry> out;
  const std::uint64_t count = 1ull << (d - 1);
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    B0Entry e;
    e.sign = SignVector::from_index(d, idx);
    const PureState b = b0_state(e.sign);
    const auto like = exact_likelihood(*b.exact, obs);
    if (!like) throw invalid_input("enumerate_b0: exact likelihood unavailable");
    e.likelihood = *like;
    e.log_likelihood = e.likelihood.log();
    e.good = !e.likelihood.is_zero();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<B0Entry> enumerate_b0(const CompiledMle& c) { return enumerate_b0(c.obs); }

std::vector<B0Entry> enumerate_b0(const CompiledQbu& c) { return enumerate_b0(c.obs); }

Mnae3SatInstance fano_instance() {
  Mnae3SatInstance inst;
  inst.d = 7;
  inst.clauses = {{1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 7},
                  {5, 6, 1}, {6, 7, 2}, {7, 1, 3}};
  return inst;
}

namespace {

// Radial (mode 0), angular (mode 1), or combined (mode 2) perturbation of a
// binarized state at the given scale.  Amplitudes are clamped nonnegative and
// rescaled onto the simplex; phases ride free, canonicalization happens when
// the checks recompute coordinates.
PureState perturbed_b0(const SignVector& s, double scale, int mode, SplitMix64& rng) {
  const int d = s.dim();
  StateCoords c;
  c.alpha.assign(d, 1.0);
  c.theta.assign(d, 0.0);
  c.n.resize(d);
  for (int k = 0; k < d; ++k) c.n[k] = (s.signs[k] < 0) ? 1 : 0;
  if (mode != 1) {
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      c.alpha[k] = std::max(0.0, 1.0 + scale * rng.normal());
      sum += c.alpha[k];
    }
    if (!(sum > 0.0)) {
      c.alpha.assign(d, 1.0);
      sum = static_cast<double>(d);
    }
    const double rescale = static_cast<double>(d) / sum;
    for (double& a : c.alpha) a *= rescale;
  }
  if (mode != 0) {
    for (int k = 1; k < d; ++k) c.theta[k] = scale * rng.normal();
  }
  return state_from_coords(c);
}

std::string describe_state(const PureState& psi) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (int k = 0; k < psi.dim(); ++k) {
    const Complex z = psi.vector()(k);
    if (k) os << ", ";
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  }
  os << "]";
  return os.str();
}

}  // namespace

LemmaSweepReport verify_lemma_bounds(int d, long long samples, std::uint64_t seed) {
  if (d < 3 || d > 6) throw invalid_input("verify_lemma_bounds: d must be in [3, 6]");
  if (samples < 1000) throw invalid_input("verify_lemma_bounds: need at least 1000 samples");

  LemmaSweepReport rep;
  rep.d = d;
  rep.samples = samples;

  const ObservationSet basic = basic_observation_set(d);
  const double log_base = d * d * std::log(static_cast<double>(d));
  const double good_base = 32.0 / (27.0 * d * d * d);
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  // Headroom for float evaluation of mathematically tight inequalities (the
  // bounds hold with equality at binarized states).
  constexpr double kSlack = 1e-9;

  SplitMix64 rng(seed);

  auto flag = [&](const std::string& what, double measured, double bound, const PureState& psi) {
    std::ostringstream os;
    os.precision(17);
    os << "d=" << d << " " << what << ": measured " << measured << " vs bound " << bound
       << " at " << describe_state(psi);
    rep.violations.push_back(os.str());
  };

  auto check_state = [&](const PureState& psi) {
    ++rep.states_tested;
    const StateCoords c = state_coords(psi);
    double eps_alpha_sq = 0.0;
    double theta_max = 0.0;
    for (int k = 0; k < d; ++k) {
      const double da = c.alpha[k] - 1.0;
      eps_alpha_sq += da * da;
      theta_max = std::max(theta_max, std::abs(c.theta[k]));
    }
    const double eps_alpha = std::sqrt(eps_alpha_sq);

    const double ll = log_likelihood(psi, basic);
    const double rel = std::isinf(ll) ? 0.0 : std::exp(ll + log_base);

    if (eps_alpha <= 1.0) {
      ++rep.amplitude_checked;
      const double bound = 1.0 - eps_alpha_sq / (4.0 * d);
      if (rel > bound + kSlack) flag("one-round amplitude ceiling", rel, bound, psi);
    }
    if (eps_alpha <= 0.5) {
      ++rep.phase_checked;
      const double bound = 1.0 - 3.0 * theta_max * theta_max;
      if (rel > bound + kSlack) flag("one-round phase ceiling", rel, bound, psi);
    }

    const B0Distance near = dist_to_b0(psi);
    const double eps = near.distance;
    if (eps <= 0.1) {
      ++rep.near_floor_checked;
      const double floor = 1.0 - 2.0 * eps * d * d * sqrt_d;
      if (rel < floor - kSlack) flag("one-round floor near a binarized state", rel, floor, psi);
    }

    // Clause bounds against a random clause; the nearest binarized state
    // decides whether its sign pattern is good or bad for that clause.
    std::array<int, 3> clause{};
    clause[0] = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d));
    do {
      clause[1] = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d));
    } while (clause[1] == clause[0]);
    do {
      clause[2] = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d));
    } while (clause[2] == clause[0] || clause[2] == clause[1]);

    const auto triple = clause_observations(clause, d);
    double update = 1.0;
    for (const auto& o : triple) update *= o.expectation(psi);

    ++rep.unit_ceiling_checked;
    if (update > 1.0 + kSlack) flag("clause update unit ceiling", update, 1.0, psi);

    const auto& s = near.sign.signs;
    const bool monochromatic =
        s[clause[0] - 1] == s[clause[1] - 1] && s[clause[1] - 1] == s[clause[2] - 1];
    if (monochromatic) {
      ++rep.bad_ceiling_checked;
      const double cap = (64.0 / 27.0) * eps * eps * eps;
      if (update > cap + kSlack) flag("clause update near a bad point", update, cap, psi);
    } else {
      ++rep.good_floor_checked;
      const double floor = good_base * (1.0 - 12.0 * eps * sqrt_d);
      if (update < floor - kSlack) flag("clause update near a good point", update, floor, psi);
    }

    if (eps_alpha < 0.1 / (d * d) && theta_max < 0.1 / d) {
      ++rep.b0_distance_checked;
      const double cap = 0.32 / d;
      if (eps > cap + kSlack) flag("distance from gated coordinates", eps, cap, psi);
    }
  };

  // Every binarized state first: the floors must be met with equality there.
  const std::uint64_t b0_count = 1ull << (d - 1);
  for (std::uint64_t idx = 0; idx < b0_count && rep.states_tested < samples; ++idx) {
    check_state(b0_state(SignVector::from_index(d, idx)));
  }

  static constexpr double kScales[3] = {1e-3, 1e-2, 1e-1};
  long long i = 0;
  while (rep.states_tested < samples) {
    if (i % 2 == 0) {
      check_state(random_pure_state(d, rng));
    } else {
      const long long j = i / 2;
      const double scale = kScales[j % 3];
      const int mode = static_cast<int>((j / 3) % 3);
      const std::uint64_t idx = rng.next() & (b0_count - 1);
      check_state(perturbed_b0(SignVector::from_index(d, idx), scale, mode, rng));
    }
    ++i;
  }
  return rep;
}

}  // namespace qbu
