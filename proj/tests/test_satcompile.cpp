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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "qbu/errors.hpp"
#include "qbu/hilbert.hpp"

using namespace qbu;

namespace {

Mnae3SatInstance single_clause_d3() {
  Mnae3SatInstance inst;
  inst.d = 3;
  inst.clauses = {{1, 2, 3}};
  return inst;
}

SignVector signs(std::initializer_list<int> v) {
  SignVector s;
  s.signs = v;
  return s;
}

}  // namespace

TEST_CASE("instance validation") {
  Mnae3SatInstance inst = single_clause_d3();
  CHECK_NOTHROW(inst.validate());

  inst.clauses = {{1, 2, 4}};
  CHECK_THROWS_AS(inst.validate(), invalid_input);
  inst.clauses = {{1, 2, 2}};
  CHECK_THROWS_AS(inst.validate(), invalid_input);
  inst.clauses = {{0, 1, 2}};
  CHECK_THROWS_AS(inst.validate(), invalid_input);
  inst.clauses.clear();
  inst.d = 0;
  CHECK_THROWS_AS(inst.validate(), invalid_input);
}

TEST_CASE("clause observations kill the symmetric state and overlap pairwise at -1/2") {
  // Three unit vectors in the plane orthogonal to (|a>+|b>+|c>)/sqrt(3); an
  // orthogonal triple cannot fit in that plane, the pairwise overlap is -1/2.
  const auto triple = clause_observations({1, 2, 3}, 4);
  CVec sym = CVec::Zero(4);
  sym(0) = sym(1) = sym(2) = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(triple[i].vector().norm() - 1.0) < 1e-12);
    CHECK(std::abs(triple[i].vector().dot(sym)) < 1e-12);
    for (int j = i + 1; j < 3; ++j) {
      CHECK(std::abs(triple[i].vector().dot(triple[j].vector()) - Complex(-0.5, 0.0)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(clause_observations({1, 2, 3}, 2), invalid_input);
  CHECK_THROWS_AS(clause_observations({1, 2, 5}, 4), invalid_input);
  CHECK_THROWS_AS(clause_observations({1, 2, 2}, 4), invalid_input);
}

TEST_CASE("not-all-equal overlaps are 8/9, 2/9, 2/9 and multiply to 32/(27 d^3)") {
  for (int d : {3, 4, 5}) {
    const auto triple = clause_observations({1, 2, 3}, d);
    SignVector s = SignVector::from_index(d, 0);
    s.signs[2] = -1;  // pattern (+, +, -) on the clause, rest +
    const PureState b = b0_state(s);

    // Projected onto the clause span the three squared overlaps are fixed.
    Rat product(1);
    Rat span_weight(3, d);
    std::vector<Rat> got;
    for (const auto& o : triple) {
      const Rat r = exact_squared_overlap(*o.exact, *b.exact);
      got.push_back(r / span_weight);
      product *= r;
    }
    CHECK(got[0] == Rat(8, 9));
    CHECK(got[1] == Rat(2, 9));
    CHECK(got[2] == Rat(2, 9));
    CHECK(product == Rat(BigInt(32), BigInt(27) * d * d * d));
  }
}

TEST_CASE("all-equal sign patterns are annihilated by every clause observation") {
  const auto triple = clause_observations({1, 2, 3}, 3);
  const PureState b = b0_state(SignVector::from_index(3, 0));  // (+, +, +)
  for (const auto& o : triple) {
    CHECK(exact_squared_overlap(*o.exact, *b.exact) == Rat(0));
  }
}

TEST_CASE("satisfiability-threshold compilation at d=3, C=2") {
  const CompiledMle c = compile_mle(single_clause_d3(), 2.0);
  CHECK(c.d == 3);
  CHECK(c.k1 == 202122);  // ceil(1200 * 3^5 * ln 2)
  CHECK(c.k2 == 1);       // ceil(2 ln 2 / (3 ln 3))
  CHECK(c.gap == doctest::Approx(2.0));
  CHECK(c.clause_count == 1);
  CHECK(c.reps == 1);
  CHECK(c.obs.dim() == 3);
  // 9 basic observations at k1 plus one clause triple at k2.
  CHECK(c.obs.items().size() == 12);
  CHECK(c.obs.total_multiplicity() == 202122 * 9 + 3);

  FactoredRational expected = FactoredRational::from_rat(Rat(1, 3));
  expected.pow(BigInt(202122) * 9);
  expected.mul_rat(Rat(32, 729));
  CHECK(c.p_exact == expected);
  CHECK(c.log_p == doctest::Approx(-202122.0 * 9.0 * std::log(3.0) + std::log(32.0 / 729.0))
                       .epsilon(1e-12));

  CHECK_THROWS_AS(compile_mle(single_clause_d3(), 1.0), invalid_input);
  CHECK_THROWS_AS(compile_mle(single_clause_d3(), 0.5), invalid_input);
  Mnae3SatInstance tiny;
  tiny.d = 2;
  CHECK_THROWS_AS(compile_mle(tiny, 2.0), invalid_input);
}

TEST_CASE("counting-threshold compilation constants") {
  const CompiledQbu c = compile_qbu(single_clause_d3());
  CHECK(c.k1 == 2883199);  // ceil(1200 * 3^7 * ln 3)
  CHECK(c.k2 == 6);        // ceil(2 * 9 / 3)
  CHECK(c.eps_g == Rat(BigInt(1), BigInt(188956800)));
  CHECK_FALSE(c.overridden);
  CHECK(c.clause_count == 1);
  CHECK(c.obs.total_multiplicity() == 2883199LL * 9 + 6 * 3);

  Mnae3SatInstance d4;
  d4.d = 4;
  CHECK(compile_qbu(d4).k2 == 11);
  Mnae3SatInstance d5;
  d5.d = 5;
  CHECK(compile_qbu(d5).k2 == 17);
  CHECK(compile_qbu(d5).eps_g == Rat(BigInt(1), BigInt(28125000000LL)));

  const CompiledQbu small = compile_qbu(single_clause_d3(), QbuOverrides{2, 1});
  CHECK(small.k1 == 2);
  CHECK(small.k2 == 1);
  CHECK(small.overridden);
  CHECK(small.eps_g == c.eps_g);
  FactoredRational expected = FactoredRational::from_rat(Rat(1, 3));
  expected.pow(BigInt(2) * 9);
  expected.mul_rat(Rat(32, 729));
  CHECK(small.p_exact == expected);

  CHECK_THROWS_AS(compile_qbu(single_clause_d3(), QbuOverrides{0, 1}), invalid_input);
}

TEST_CASE("binarized-state enumeration splits good from bad") {
  const CompiledQbu c = compile_qbu(single_clause_d3(), QbuOverrides{1, 1});
  const auto table = enumerate_b0(c);
  REQUIRE(table.size() == 4);
  int good = 0;
  for (const auto& e : table) {
    if (e.good) {
      ++good;
      CHECK(e.likelihood == c.p_exact);
      CHECK(e.log_likelihood == doctest::Approx(c.log_p).epsilon(1e-12));
    } else {
      CHECK(e.likelihood.is_zero());
      CHECK(e.log_likelihood == -std::numeric_limits<double>::infinity());
      // The only monochromatic pattern is all-plus, index 0.
      CHECK(e.sign.index() == 0);
    }
  }
  CHECK(good == 3);
}

TEST_CASE("clause-free compilation puts every binarized state at the basic value") {
  Mnae3SatInstance inst;
  inst.d = 3;
  const CompiledQbu c = compile_qbu(inst, QbuOverrides{2, 1});
  const auto table = enumerate_b0(c);
  REQUIRE(table.size() == 4);
  for (const auto& e : table) {
    CHECK(e.good);
    CHECK(e.likelihood == c.p_exact);
    CHECK(e.log_likelihood == doctest::Approx(-2.0 * 9.0 * std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("enumeration wants exact data and bounded dimension") {
  ObservationSet obs(2);
  CVec v = CVec::Zero(2);
  v(0) = 1.0;
  obs.add(Observation::rank_one(v));  // no exact form attached
  CHECK_THROWS_AS(enumerate_b0(obs), invalid_input);

  Mnae3SatInstance wide;
  wide.d = 21;
  CHECK_THROWS_AS(enumerate_b0(compile_qbu(wide, QbuOverrides{1, 1}).obs), resource_limit);
}

TEST_CASE("repetition amplification scales everything by exactly reps") {
  const CompiledMle c = compile_mle(single_clause_d3(), 2.0);
  const CompiledMle tripled = amplify(c, 3);
  CHECK(tripled.reps == 3);
  CHECK(tripled.k1 == c.k1);
  CHECK(tripled.k2 == c.k2);
  REQUIRE(tripled.obs.items().size() == c.obs.items().size());
  for (std::size_t i = 0; i < c.obs.items().size(); ++i) {
    CHECK(tripled.obs.items()[i].multiplicity == 3 * c.obs.items()[i].multiplicity);
  }
  FactoredRational cubed = c.p_exact;
  cubed.pow(BigInt(3));
  CHECK(tripled.p_exact == cubed);
  CHECK(tripled.log_p == doctest::Approx(3.0 * c.log_p).epsilon(1e-15));
  CHECK(tripled.gap == doctest::Approx(8.0));

  // A solution state's measured log-likelihood triples too.
  SignVector sol = signs({1, 1, -1});
  const double base = log_likelihood(b0_state(sol), c.obs);
  const double amp = log_likelihood(b0_state(sol), tripled.obs);
  CHECK(amp == doctest::Approx(3.0 * base).epsilon(1e-12));

  const CompiledMle same = amplify(c, 1);
  CHECK(same.reps == 1);
  CHECK(same.p_exact == c.p_exact);

  const CompiledMle chained = amplify(amplify(c, 2), 5);
  CHECK(chained.reps == 10);
  FactoredRational tenth = c.p_exact;
  tenth.pow(BigInt(10));
  CHECK(chained.p_exact == tenth);

  CHECK_THROWS_AS(amplify(c, 0), invalid_input);

  const CompiledQbu q = compile_qbu(single_clause_d3(), QbuOverrides{2, 1});
  const CompiledQbu q2 = amplify(q, 2);
  CHECK(q2.reps == 2);
  CHECK(q2.obs.total_multiplicity() == 2 * q.obs.total_multiplicity());
  FactoredRational sq = q.p_exact;
  sq.pow(BigInt(2));
  CHECK(q2.p_exact == sq);
}

TEST_CASE("not-all-equal evaluation") {
  const Mnae3SatInstance inst = single_clause_d3();
  CHECK(nae_eval(signs({1, 1, -1}), inst).satisfied);
  const NaeResult bad = nae_eval(signs({1, 1, 1}), inst);
  CHECK_FALSE(bad.satisfied);
  REQUIRE(bad.violated.size() == 1);
  CHECK(bad.violated[0] == 0);
  CHECK_THROWS_AS(nae_eval(signs({1, 1}), inst), invalid_input);
}

TEST_CASE("the Fano-plane instance defeats every sign pattern") {
  const Mnae3SatInstance fano = fano_instance();
  CHECK(fano.d == 7);
  CHECK(fano.clauses.size() == 7);
  CHECK_NOTHROW(fano.validate());
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const NaeResult r = nae_eval(SignVector::from_index(7, idx), fano);
    CHECK_FALSE(r.satisfied);
    CHECK_FALSE(r.violated.empty());
  }
  const auto table = enumerate_b0(compile_qbu(fano, QbuOverrides{1, 1}));
  REQUIRE(table.size() == 64);
  for (const auto& e : table) {
    CHECK_FALSE(e.good);
    CHECK(e.likelihood.is_zero());
  }
}

TEST_CASE("likelihood-bound sweep runs clean and exercises every branch") {
  const LemmaSweepReport rep = verify_lemma_bounds(3, 1000, 1);
  CHECK(rep.passed());
  for (const auto& v : rep.violations) {
    MESSAGE(v);  // surfaced loudly if the check above ever fails
  }
  CHECK(rep.d == 3);
  CHECK(rep.samples == 1000);
  CHECK(rep.states_tested == 1000);
  CHECK(rep.amplitude_checked > 0);
  CHECK(rep.phase_checked > 0);
  CHECK(rep.near_floor_checked > 0);
  CHECK(rep.good_floor_checked > 0);
  CHECK(rep.bad_ceiling_checked > 0);
  CHECK(rep.unit_ceiling_checked == rep.states_tested);
  CHECK(rep.b0_distance_checked > 0);

  const LemmaSweepReport rep4 = verify_lemma_bounds(4, 1000, 7);
  CHECK(rep4.passed());
  CHECK(rep4.good_floor_checked > 0);
  CHECK(rep4.bad_ceiling_checked > 0);

  CHECK_THROWS_AS(verify_lemma_bounds(2, 1000, 1), invalid_input);
  CHECK_THROWS_AS(verify_lemma_bounds(7, 1000, 1), invalid_input);
  CHECK_THROWS_AS(verify_lemma_bounds(3, 999, 1), invalid_input);
}

TEST_CASE("sweep is deterministic per seed") {
  const LemmaSweepReport a = verify_lemma_bounds(3, 1000, 42);
  const LemmaSweepReport b = verify_lemma_bounds(3, 1000, 42);
  CHECK(a.amplitude_checked == b.amplitude_checked);
  CHECK(a.phase_checked == b.phase_checked);
  CHECK(a.near_floor_checked == b.near_floor_checked);
  CHECK(a.good_floor_checked == b.good_floor_checked);
  CHECK(a.bad_ceiling_checked == b.bad_ceiling_checked);
  CHECK(a.b0_distance_checked == b.b0_distance_checked);
  CHECK(a.violations == b.violations);
}
