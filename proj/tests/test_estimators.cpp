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
#include "qbu/estimators.hpp"

using namespace qbu;

namespace {
ObservationSet exact_basis_obs(int d, int k, long long mult) {
  ObservationSet obs(d);
  CVec v = CVec::Zero(d);
  v(k) = 1.0;
  Observation o = Observation::rank_one(v);
  ExactVector ev;
  ev.entries.assign(d, GaussRat{});
  ev.entries[k] = GaussRat(1);
  o.exact = std::move(ev);
  obs.add(std::move(o), mult);
  return obs;
}
}  // namespace

TEST_CASE("density matrix validation") {
  CMat ok(2, 2);
  ok << Complex(0.5, 0), Complex(0, 0.1), Complex(0, -0.1), Complex(0.5, 0);
  CHECK_NOTHROW(DensityMatrix{ok});
  CMat bad_trace = 2.0 * ok;
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, invalid_input);
  CMat not_psd(2, 2);
  not_psd << Complex(1.5, 0), Complex(0, 0), Complex(0, 0), Complex(-0.5, 0);
  CHECK_THROWS_AS(DensityMatrix{not_psd}, invalid_input);
}

TEST_CASE("posterior mean state, frozen values") {
  // One copy of |0><0| in d = 2 tilts the posterior toward |0>.
  const auto obs = exact_basis_obs(2, 0, 1);
  const DensityMatrix rho = rho_avg(obs);
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(rho.matrix()(0, 1)) == doctest::Approx(0.0));

  const auto exact = rho_avg_exact(obs);
  REQUIRE(exact.has_value());
  CHECK((*exact)[0][0] == GaussRat{Rat(2, 3), Rat(0)});
  CHECK((*exact)[1][1] == GaussRat{Rat(1, 3), Rat(0)});
  CHECK((*exact)[0][1] == GaussRat{Rat(0), Rat(0)});
}

TEST_CASE("posterior mean with no data is maximally mixed") {
  ObservationSet obs(3);
  const DensityMatrix rho = rho_avg(obs);
  for (int i = 0; i < 3; ++i)
    CHECK(rho.matrix()(i, i).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("posterior mean of a complex instance stays Hermitian and exact") {
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(1, 0), Complex(0, 1);
  Observation o = Observation::rank_one(v);
  ExactVector ev;
  ev.entries = {GaussRat(1), GaussRat{Rat(0), Rat(1)}};
  o.exact = std::move(ev);
  obs.add(std::move(o), 2);

  const DensityMatrix rho = rho_avg(obs);
  const auto exact = rho_avg_exact(obs);
  REQUIRE(exact.has_value());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(rho.matrix()(i, j).real() ==
            doctest::Approx(rat_to_double((*exact)[i][j].re)).epsilon(1e-12));
      CHECK(rho.matrix()(i, j).imag() ==
            doctest::Approx(rat_to_double((*exact)[i][j].im)).epsilon(1e-12));
    }
  // The off-diagonal is genuinely complex for this instance.
  CHECK((*exact)[0][1].im != 0);
}

TEST_CASE("posterior density") {
  const auto obs = exact_basis_obs(2, 0, 1);
  CVec e0(2), e1(2);
  e0 << Complex(1, 0), Complex(0, 0);
  e1 << Complex(0, 0), Complex(1, 0);
  CHECK(posterior_density(obs, PureState{e0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(posterior_density(obs, PureState{e1}) == doctest::Approx(0.0));
}

TEST_CASE("observable expectations equal the trace against the mean state") {
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(0.6, 0), Complex(0, 0.8);
  obs.add(Observation::rank_one(v), 2);

  CHECK(observable_expectation(obs, CMat::Identity(2, 2)) ==
        doctest::Approx(1.0).epsilon(1e-10));

  CMat a(2, 2);
  a << Complex(0.3, 0), Complex(0.2, -0.4), Complex(0.2, 0.4), Complex(-1.1, 0);
  const DensityMatrix rho = rho_avg(obs);
  const double via_trace = (a * rho.matrix()).trace().real();
  CHECK(observable_expectation(obs, a) == doctest::Approx(via_trace).epsilon(1e-10));

  CMat skew(2, 2);
  skew << Complex(0, 1), Complex(0, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS_AS(observable_expectation(obs, skew), invalid_input);
}

TEST_CASE("peeling one observation reassembles the mean likelihood") {
  ObservationSet obs(2);
  CVec v(2), w(2);
  v << Complex(1, 0), Complex(0, 1);
  w << Complex(1, 0), Complex(-1, 0);
  obs.add(Observation::rank_one(v), 2);
  obs.add(Observation::rank_one(w), 1);

  const double direct = pnorm_exact(obs, Convention::normalized).value;
  CHECK(pnorm_from_rho_avg(obs) == doctest::Approx(direct).epsilon(1e-10));

  // Single-item edge: the prefix is empty and the factor is a plain mean.
  const auto single = exact_basis_obs(2, 0, 1);
  CHECK(pnorm_from_rho_avg(single) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("likelihood maximization finds a pure target") {
  ObservationSet obs(3);
  CVec v(3);
  v << Complex(0.5, 0.1), Complex(-0.3, 0.7), Complex(0.2, -0.2);
  obs.add(Observation::rank_one(v), 3);
  const MleResult res = maximize_likelihood(obs, 4, 17);
  CHECK(res.log_likelihood == doctest::Approx(0.0).epsilon(1e-9));
  CVec unit = v / v.norm();
  CHECK(std::abs(unit.dot(res.state.vector())) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.restarts_used == 4 + 4);  // binarized starts plus random ones
}

TEST_CASE("likelihood maximization on the basic set sits on a binarized state") {
  const int d = 2;
  const ObservationSet obs = basic_observation_set(d);
  const MleResult res = maximize_likelihood(obs, 8, 3);
  const double expect = -4.0 * std::log(2.0);  // d^(-d^2)
  CHECK(res.log_likelihood == doctest::Approx(expect).epsilon(1e-9));
  CHECK(dist_to_b0(res.state).distance < 1e-4);
}

TEST_CASE("likelihood maximization handles general observations") {
  ObservationSet obs(2);
  CMat g(2, 2);
  g << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0.25, 0);
  obs.add(Observation::general(g), 2);
  const MleResult res = maximize_likelihood(obs, 2, 5);
  CHECK(res.log_likelihood == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(res.state.vector()(0)) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("likelihood maximization is deterministic per seed") {
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(0.8, 0), Complex(0, 0.6);
  obs.add(Observation::rank_one(v), 2);
  const MleResult a = maximize_likelihood(obs, 3, 11);
  const MleResult b = maximize_likelihood(obs, 3, 11);
  CHECK(a.state.vector() == b.state.vector());
  CHECK(a.log_likelihood == b.log_likelihood);
}
