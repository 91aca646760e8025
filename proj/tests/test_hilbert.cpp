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

#include <doctest.h>

#include <cmath>

#include "qbu/errors.hpp"
#include "qbu/hilbert.hpp"

using namespace qbu;

namespace {
ExactVector ev2(GaussRat a, GaussRat b) {
  ExactVector v;
  v.entries = {std::move(a), std::move(b)};
  return v;
}
}  // namespace

TEST_CASE("exact squared overlaps") {
  const auto a = ev2(GaussRat(1), GaussRat{Rat(0), Rat(1)});   // (1, i)
  const auto b = ev2(GaussRat(1), GaussRat{Rat(0), Rat(-1)});  // (1, -i)
  CHECK(exact_squared_overlap(a, a) == 1);
  CHECK(exact_squared_overlap(a, b) == 0);
  const auto c = ev2(GaussRat(1), GaussRat(1));
  CHECK(exact_squared_overlap(a, c) == Rat(1, 2));  // |1 - i|^2 / 4
  const auto d = ev2(GaussRat(3), GaussRat(0));     // scale invariance
  const auto e = ev2(GaussRat(1), GaussRat(1));
  CHECK(exact_squared_overlap(d, e) == Rat(1, 2));
}

TEST_CASE("state validation") {
  CVec v(2);
  v << Complex(1, 0), Complex(1, 0);
  CHECK_THROWS_AS(PureState{v}, invalid_input);
  const PureState psi = PureState::normalized(v);
  CHECK(psi.vector()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(PureState::normalized(CVec::Zero(2)), invalid_input);
}

TEST_CASE("observation validation and expectation") {
  CMat m(2, 2);
  m << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(1, 0);  // Hermitian PSD
  const Observation o = Observation::general(m);
  CHECK(o.trace() == doctest::Approx(2.0));

  CMat bad = m;
  bad(0, 1) = Complex(5, 0);  // breaks Hermiticity
  CHECK_THROWS_AS(Observation::general(bad), invalid_input);

  CMat neg(2, 2);
  neg << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  CHECK_THROWS_AS(Observation::general(neg), invalid_input);

  CVec v(2);
  v << Complex(3, 0), Complex(0, 0);  // rank_one normalizes
  const Observation p = Observation::rank_one(v);
  CHECK(p.trace() == doctest::Approx(1.0));
  CVec w(2);
  w << Complex(1, 0), Complex(0, 0);
  const PureState psi{w};
  CHECK(p.expectation(psi) == doctest::Approx(1.0));

  // The general route and the rank-one route agree on the same projector.
  const Observation pg = Observation::general(p.matrix());
  CVec u(2);
  u << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const PureState phi{u};
  CHECK(pg.expectation(phi) == doctest::Approx(p.expectation(phi)).epsilon(1e-12));
}

TEST_CASE("sign vectors index in lexicographic order") {
  for (std::uint64_t k = 0; k < 8; ++k) {
    const SignVector s = SignVector::from_index(4, k);
    CHECK(s.signs[0] == 1);
    CHECK(s.index() == k);
  }
  CHECK(SignVector::from_index(3, 0).signs == std::vector<int>{1, 1, 1});
  CHECK(SignVector::from_index(3, 1).signs == std::vector<int>{1, 1, -1});
  CHECK(SignVector::from_index(3, 2).signs == std::vector<int>{1, -1, 1});
  CHECK(SignVector::from_index(3, 3).signs == std::vector<int>{1, -1, -1});
  CHECK_THROWS_AS(SignVector::from_index(2, 2), invalid_input);
}

TEST_CASE("binarized states against the basic observations") {
  const int d = 3;
  const ObservationSet obs = basic_observation_set(d);
  CHECK(static_cast<int>(obs.items().size()) == d * d);
  CHECK(obs.total_multiplicity() == d * d);
  CHECK(obs.all_rank_one());
  CHECK(obs.all_exact());
  for (std::uint64_t k = 0; k < 4; ++k) {
    const PureState b = b0_state(SignVector::from_index(d, k));
    REQUIRE(b.exact.has_value());
    for (const auto& it : obs.items()) {
      CHECK(exact_squared_overlap(*it.obs.exact, *b.exact) == Rat(1, d));
      CHECK(it.obs.expectation(b) == doctest::Approx(1.0 / d).epsilon(1e-12));
    }
  }
}

TEST_CASE("likelihood on a binarized state") {
  const int d = 2;
  const ObservationSet obs = basic_observation_set(d);
  const PureState b = b0_state(SignVector::from_index(d, 0));
  const double ll = log_likelihood(b, obs);
  CHECK(ll == doctest::Approx(-4.0 * std::log(2.0)).epsilon(1e-12));

  const auto exact = exact_likelihood(*b.exact, obs);
  REQUIRE(exact.has_value());
  CHECK(exact->to_rat() == Rat(1, 16));
  const auto ell = exact_log_likelihood(*b.exact, obs);
  REQUIRE(ell.has_value());
  CHECK(*ell == doctest::Approx(ll).epsilon(1e-12));
}

TEST_CASE("likelihood vanishes on an orthogonal observation") {
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(1, 0), Complex(0, 0);
  obs.add(Observation::rank_one(v));
  CVec w(2);
  w << Complex(0, 0), Complex(1, 0);
  const PureState psi{w};
  CHECK(log_likelihood(psi, obs) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("coordinate round trip") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const PureState psi = random_pure_state(d, rng);
    const StateCoords c = state_coords(psi);
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      CHECK(c.alpha[k] >= 0.0);
      CHECK(c.theta[k] >= -0.5);
      CHECK(c.theta[k] < 0.5);
      CHECK((c.n[k] == 0 || c.n[k] == 1));
      sum += c.alpha[k];
    }
    CHECK(sum == doctest::Approx(static_cast<double>(d)).epsilon(1e-10));
    const PureState back = state_from_coords(c);
    const double fidelity = std::abs(back.vector().dot(psi.vector()));
    CHECK(fidelity == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(state_from_coords(StateCoords{{1.0, 2.0}, {0.0, 0.0}, {0, 0}, 0}),
                  invalid_input);
}

TEST_CASE("distance to the binarized set") {
  const int d = 3;
  for (std::uint64_t k = 0; k < 4; ++k) {
    const PureState b = b0_state(SignVector::from_index(d, k));
    const B0Distance res = dist_to_b0(b);
    CHECK(res.distance == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.sign.index() == k);
  }

  // Global-phase invariance: rotating the state does not move it away.
  const PureState b = b0_state(SignVector::from_index(d, 2));
  CVec rotated = b.vector() * std::polar(1.0, 0.7);
  const B0Distance res = dist_to_b0(PureState{std::move(rotated)});
  CHECK(res.distance == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(res.sign.index() == 2);

  // |0> in d=2 is equidistant from both binarized states; ties take the
  // lexicographically smallest sign vector.
  CVec e0(2);
  e0 << Complex(1, 0), Complex(0, 0);
  const B0Distance tie = dist_to_b0(PureState{e0});
  CHECK(tie.sign.index() == 0);
  CHECK(tie.distance == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("random states are deterministic and normalized") {
  SplitMix64 a(5), b(5);
  const PureState x = random_pure_state(4, a);
  const PureState y = random_pure_state(4, b);
  CHECK(x.vector() == y.vector());
  CHECK(x.vector().norm() == doctest::Approx(1.0).epsilon(1e-12));
}
