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

#ifndef QBU_VERIFY_HPP
#define QBU_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qbu/report.hpp"

namespace qbu {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  // Lemma sweep shape.
  int lemma_d = 3;
  long long lemma_samples = 10000;
  // Reduced sample counts for quick unit-test runs; acceptance runs use the
  // full defaults.
  bool quick = false;
};

// Closed-form constants reproduced exactly: d^(-d^2) basic-round likelihoods,
// clause overlaps {8/9, 2/9, 2/9} and the 32/(27 d^3) update, (2n-1)!! pairing
// counts, sphere areas, and both readings of the Wick constant with their
// measured ratio.
std::vector<CheckResult> verify_constants();

// Independent-oracle equivalences: exact vs Monte Carlo vs pairing-formula
// p_norm (with the comparison table), Ryser vs permutation-sum permanents,
// memoized vs enumerated pairing sums, interpolation extraction vs direct
// functionals, and the estimator consistency identities.
std::vector<CheckResult> verify_oracles(const VerifyOptions& opts);

// The likelihood-bound sweep of verify_lemma_bounds, reported check by check.
std::vector<CheckResult> verify_lemmas(const VerifyOptions& opts);

// Gadget search, chain arithmetic, doubling identity, bipartite lift, and
// plan execution on small graphs.
std::vector<CheckResult> verify_graph_chain(const VerifyOptions& opts);

// Compiled-instance behavior end to end: solution-state likelihoods, the
// binarized-state enumeration, search separation on the unsatisfiable
// instance, amplification, and the counting-threshold likelihood floor.
std::vector<CheckResult> verify_end_to_end(const VerifyOptions& opts);

// suite is one of: constants, oracles, lemmas, graph-chain, end-to-end.
RunReport run_suite(const std::string& suite, const VerifyOptions& opts);

}  // namespace qbu

#endif  // QBU_VERIFY_HPP
