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

#ifndef QBU_SATCOMPILE_HPP
#define QBU_SATCOMPILE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbu/exact.hpp"
#include "qbu/hilbert.hpp"

namespace qbu {

// Monotone not-all-equal 3-SAT: a clause is satisfied unless its three
// variables carry equal signs.  Variables are 1-based; whole clauses may
// repeat.
struct Mnae3SatInstance {
  int d = 0;
  std::vector<std::array<int, 3>> clauses;

  void validate() const;  // throws invalid_input
};

// Projectors onto (|a> + |b> - 2|c>)/sqrt(6) and its two cyclic shifts.  All
// three are orthogonal to (|a> + |b> + |c>)/sqrt(3), which kills the
// likelihood of any sign pattern that is constant on the clause; a
// not-all-equal pattern keeps squared overlaps {8/9, 2/9, 2/9} within the
// clause span, an update of 32/(27 d^3) for the triple.
std::array<Observation, 3> clause_observations(const std::array<int, 3>& clause, int d);

// A satisfiability-threshold instance: k1 repeats of the full basic
// observation set plus k2 repeats of each clause triple.  log_p is the log
// likelihood of a solution state, one basic factor d^(-d^2) per round and one
// 32/(27 d^3) factor per compiled clause occurrence; p_exact is the same
// value as a factored rational.
struct CompiledMle {
  ObservationSet obs;
  int d = 0;
  long long k1 = 0, k2 = 0;
  double gap = 0.0;  // the promised likelihood ratio C
  int clause_count = 0;
  long long reps = 1;
  double log_p = 0.0;
  FactoredRational p_exact;
};

// k1 = ceil(1200 d^5 ln C), k2 = ceil(2 ln C / (3 ln d)).  The printed source
// of these constants leaves k1 unrounded; the ceiling only adds observations,
// which preserves the promise direction.
CompiledMle compile_mle(const Mnae3SatInstance& inst, double C);

struct QbuOverrides {
  long long k1 = 1, k2 = 1;
};

// Counting-threshold instance: k1 = ceil(1200 d^7 ln d), k2 = ceil(2 d^2 / 3),
// with a good-ball radius eps_g = 1/(2400 d^9 (1+d)).  Overrides produce
// desk-scale instances and are flagged.
struct CompiledQbu {
  ObservationSet obs;
  int d = 0;
  long long k1 = 0, k2 = 0;
  Rat eps_g{0};
  int clause_count = 0;
  bool overridden = false;
  long long reps = 1;
  double log_p = 0.0;
  FactoredRational p_exact;
};

CompiledQbu compile_qbu(const Mnae3SatInstance& inst,
                        const std::optional<QbuOverrides>& overrides = {});

// Repetition amplification: every multiplicity, and therefore every log
// likelihood and log_p, scales by exactly reps; the promise gap becomes
// gap^reps.
CompiledMle amplify(const CompiledMle& c, long long reps);
CompiledQbu amplify(const CompiledQbu& c, long long reps);

struct NaeResult {
  bool satisfied = true;
  std::vector<int> violated;  // clause indices
};

NaeResult nae_eval(const SignVector& assignment, const Mnae3SatInstance& inst);

struct B0Entry {
  SignVector sign;
  FactoredRational likelihood;
  double log_likelihood = 0.0;  // -infinity at bad points
  bool good = false;
};

// Exact likelihood at each of the 2^(d-1) binarized states.  Good entries
// (nonzero likelihood) all share the solution-state value; bad entries have a
// clause observation orthogonal to the state.  Guarded at d <= 20.
std::vector<B0Entry> enumerate_b0(const ObservationSet& obs);
std::vector<B0Entry> enumerate_b0(const CompiledMle& c);
std::vector<B0Entry> enumerate_b0(const CompiledQbu& c);

// Seven variables, seven clauses, the lines of the Fano plane: the smallest
// 3-uniform hypergraph that is not 2-colorable, so no sign pattern satisfies
// all clauses.
Mnae3SatInstance fano_instance();

struct LemmaSweepReport {
  int d = 0;
  long long samples = 0;
  long long states_tested = 0;
  // How often each inequality branch was exercised (its hypothesis held).
  long long amplitude_checked = 0;
  long long phase_checked = 0;
  long long near_floor_checked = 0;
  long long good_floor_checked = 0;
  long long bad_ceiling_checked = 0;
  long long unit_ceiling_checked = 0;
  long long b0_distance_checked = 0;
  std::vector<std::string> violations;  // empty means the sweep passed

  bool passed() const { return violations.empty(); }
};

// Samples Haar-random states plus adversarial radial/angular perturbations of
// binarized states, and checks at every state the likelihood bounds the
// hardness argument rests on:
//   - one basic round, relative to a binarized state, is at most
//     1 - eps_alpha^2/(4d) when eps_alpha = |alpha - 1| <= 1, and at most
//     1 - 3 theta_i^2 for every i when eps_alpha <= 1/2 (the hypotheses the
//     bound's derivation actually uses; without the first gate the bound goes
//     negative at zero-likelihood states for d >= 6);
//   - within distance eps <= 0.1 of a binarized state, one basic round is at
//     least (1 - 2 eps d^(5/2)) / d^(d^2);
//   - a clause-triple update is never more than 1; within eps of a good point
//     it is at least (32/27d^3)(1 - 12 eps sqrt(d)); within eps of a bad
//     point it is at most (64/27) eps^3;
//   - an alpha vector within 0.1/d^2 of all-ones and all phases within 0.1/d
//     of zero place the state within 0.32/d of a binarized state.  The phase
//     coordinate is in units of pi, so each theta contributes about pi*theta
//     of chord; a d^(-3/2) cap is not reachable from these gates.
// Distances are Euclidean, minimized over global phase.  Violations are
// findings and are reported verbatim, never tolerated.
LemmaSweepReport verify_lemma_bounds(int d, long long samples, std::uint64_t seed);

}  // namespace qbu

#endif  // QBU_SATCOMPILE_HPP
