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
#include "qbu/sphere.hpp"

using namespace qbu;

namespace {
constexpr double kPi = 3.14159265358979323846;

ObservationSet basis_projector_set(int d, int k, long long mult) {
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

TEST_CASE("monomial integrals, frozen values") {
  // Circle: circumference, second and fourth moments.
  auto area2 = monomial_sphere_integral({}, 2);
  CHECK(area2.coeff == 2);
  CHECK(area2.pi_power == 1);
  auto x2 = monomial_sphere_integral({2, 0}, 2);
  CHECK(x2.coeff == 1);
  CHECK(x2.pi_power == 1);
  auto x4 = monomial_sphere_integral({4, 0}, 2);
  CHECK(x4.coeff == Rat(3, 4));  // (3/4) pi

  // Odd exponents vanish.
  CHECK(monomial_sphere_integral({1, 0}, 2).is_zero());
  CHECK(monomial_sphere_integral({2, 1, 0, 0}, 4).is_zero());

  // S^3: x1^2 x2^2 integrates to pi^2 / 12.
  auto mixed = monomial_sphere_integral({2, 2, 0, 0}, 4);
  CHECK(mixed.coeff == Rat(1, 12));
  CHECK(mixed.pi_power == 2);

  // Odd ambient dimension keeps the rational-times-pi-power shape.
  auto s0 = monomial_sphere_integral({2}, 1);  // two points, each contributing 1
  CHECK(s0.coeff == 2);
  CHECK(s0.pi_power == 0);
  auto s2 = monomial_sphere_integral({2, 0, 0}, 3);
  CHECK(s2.coeff == Rat(4, 3));
  CHECK(s2.pi_power == 1);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1).coeff == 2);
  CHECK(sphere_area(1).pi_power == 0);
  CHECK(sphere_area(2).value() == doctest::Approx(2.0 * kPi));
  CHECK(sphere_area(3).value() == doctest::Approx(4.0 * kPi));
  CHECK(sphere_area(4).value() == doctest::Approx(2.0 * kPi * kPi));
  CHECK(sphere_area(5).value() == doctest::Approx(8.0 * kPi * kPi / 3.0));
  CHECK(sphere_area(6).coeff == 1);
  CHECK(sphere_area(6).pi_power == 3);
}

TEST_CASE("second moments sum to the area") {
  for (int m = 2; m <= 7; ++m) {
    Rat acc = 0;
    for (int i = 0; i < m; ++i) {
      MultiIndex idx(m, 0u);
      idx[i] = 2;
      const auto r = monomial_sphere_integral(idx, m);
      CHECK(r.pi_power == sphere_area(m).pi_power);
      acc += r.coeff;
    }
    CHECK(acc == sphere_area(m).coeff);
  }
}

TEST_CASE("likelihood polynomial of a basis projector") {
  const auto obs = basis_projector_set(2, 0, 1);
  ExpansionStats stats;
  const RealPolynomial p = likelihood_polynomial(obs, kDefaultDegreeGuard, &stats);
  CHECK(p.num_vars == 4);
  CHECK(p.size() == 2);  // u1^2 + w1^2
  CHECK(stats.peak_terms >= 2);
  CHECK(stats.terms_per_factor.size() == 1);

  const auto pe = likelihood_polynomial_exact(obs);
  REQUIRE(pe.has_value());
  CHECK(pe->size() == 2);
  for (const auto& [idx, c] : pe->terms) CHECK(c == 1);
}

TEST_CASE("haar moments of a basis projector") {
  // E |<0|psi>|^2 = 1/d and E |<0|psi>|^4 = 2/(d(d+1)).
  for (int d = 1; d <= 3; ++d) {
    const auto r1 = pnorm_exact(basis_projector_set(d, 0, 1), Convention::normalized);
    REQUIRE(r1.exact.has_value());
    CHECK(r1.exact->pi_power == 0);
    CHECK(r1.exact->coeff == Rat(1, d));

    const auto r2 = pnorm_exact(basis_projector_set(d, 0, 2), Convention::normalized);
    REQUIRE(r2.exact.has_value());
    CHECK(r2.exact->coeff == Rat(2, static_cast<long long>(d) * (d + 1)));
  }
}

TEST_CASE("raw and normalized conventions differ by the area") {
  const auto obs = basis_projector_set(2, 0, 2);
  const auto raw = pnorm_exact(obs, Convention::raw);
  const auto norm = pnorm_exact(obs, Convention::normalized);
  CHECK(raw.convention == Convention::raw);
  CHECK(norm.convention == Convention::normalized);
  REQUIRE(raw.exact.has_value());
  CHECK(raw.exact->pi_power == 2);
  CHECK(raw.exact->coeff == Rat(2, 3));  // (2/3) pi^2 over S^3
  CHECK(raw.value == doctest::Approx(norm.value * sphere_area(4).value()).epsilon(1e-12));
}

TEST_CASE("exact and float expansions agree") {
  // A genuinely complex instance: projector onto (|0> + i|1>)/sqrt(2).
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(1, 0), Complex(0, 1);
  Observation o = Observation::rank_one(v);
  ExactVector ev;
  ev.entries = {GaussRat(1), GaussRat{Rat(0), Rat(1)}};
  o.exact = std::move(ev);
  obs.add(std::move(o), 2);
  CVec w(2);
  w << Complex(0, 0), Complex(1, 0);
  Observation o2 = Observation::rank_one(w);
  ExactVector ev2;
  ev2.entries = {GaussRat(0), GaussRat(1)};
  o2.exact = std::move(ev2);
  obs.add(std::move(o2), 1);

  const auto exact = pnorm_exact(obs, Convention::normalized);
  REQUIRE(exact.exact.has_value());
  const RealPolynomial p = likelihood_polynomial(obs);
  const double raw = integrate_polynomial(p);
  CHECK(raw / sphere_area(4).value() == doctest::Approx(exact.value).epsilon(1e-12));
}

TEST_CASE("degree guard") {
  const auto obs = basis_projector_set(2, 0, 13);  // degree 26
  CHECK_THROWS_AS(likelihood_polynomial(obs), resource_limit);
  CHECK_THROWS_AS(pnorm_exact(obs), resource_limit);
  CHECK_NOTHROW(likelihood_polynomial(basis_projector_set(2, 0, 12)));
}

TEST_CASE("monte carlo estimate matches the exact mean") {
  ObservationSet obs(2);
  CVec v(2);
  v << Complex(1, 0), Complex(0, 1);
  obs.add(Observation::rank_one(v), 2);
  const auto exact = pnorm_exact(obs, Convention::normalized);

  const McResult mc = pnorm_montecarlo(obs, 200000, 99);
  CHECK(mc.samples == 200000);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.estimate - exact.value) < 5.0 * mc.std_error);
}

TEST_CASE("monte carlo is thread-count independent") {
  const auto obs = basis_projector_set(3, 1, 2);
  const McResult one = pnorm_montecarlo(obs, 30000, 7, 1);
  const McResult four = pnorm_montecarlo(obs, 30000, 7, 4);
  CHECK(one.estimate == four.estimate);
  CHECK(one.std_error == four.std_error);
  const McResult other_seed = pnorm_montecarlo(obs, 30000, 8, 1);
  CHECK(one.estimate != other_seed.estimate);
}
