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
#include "qbu/exact.hpp"
#include "qbu/rng.hpp"

using namespace qbu;

TEST_CASE("factorials and powers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(5) == 15);
  CHECK(double_factorial(6) == 48);
  CHECK(double_factorial(7) == 105);
  CHECK(ipow(BigInt(2), 10) == 1024);
  CHECK(ipow(BigInt(3), 0) == 1);
  CHECK(rpow(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(rpow(Rat(2), -2) == Rat(1, 4));
  CHECK_THROWS_AS(rpow(Rat(0), -1), invalid_input);
}

TEST_CASE("big logs") {
  CHECK(log_bigint(BigInt(1)) == doctest::Approx(0.0));
  CHECK(log_bigint(BigInt(7)) == doctest::Approx(std::log(7.0)).epsilon(1e-14));
  const BigInt huge = ipow(BigInt(10), 500);
  CHECK(log_bigint(huge) == doctest::Approx(500.0 * std::log(10.0)).epsilon(1e-13));
  CHECK(log_rat(Rat(3, 7)) == doctest::Approx(std::log(3.0 / 7.0)).epsilon(1e-14));
  const Rat tiny = Rat(1) / Rat(ipow(BigInt(10), 400));
  CHECK(log_rat(tiny) == doctest::Approx(-400.0 * std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("rational strings") {
  CHECK(rat_to_string(Rat(3, 4)) == "3/4");
  CHECK(rat_to_string(Rat(-2)) == "-2");
  CHECK(rat_to_string(Rat(0)) == "0");
  CHECK(rat_from_string("3/4") == Rat(3, 4));
  CHECK(rat_from_string("-7") == Rat(-7));
  CHECK(rat_from_string(rat_to_string(Rat(22, 7))) == Rat(22, 7));
  CHECK_THROWS_AS(rat_from_string("abc"), invalid_input);
  CHECK_THROWS_AS(rat_from_string("1/0"), invalid_input);
}

TEST_CASE("integer square roots") {
  CHECK(isqrt_floor(BigInt(0)) == 0);
  CHECK(isqrt_floor(BigInt(15)) == 3);
  CHECK(isqrt_floor(BigInt(16)) == 4);
  const BigInt big = ipow(BigInt(12345678901234567ll), 2);
  CHECK(isqrt_floor(big) == BigInt(12345678901234567ll));
  CHECK(isqrt_floor(big - 1) == BigInt(12345678901234566ll));
  CHECK(*exact_sqrt(BigInt(49)) == 7);
  CHECK(!exact_sqrt(BigInt(50)).has_value());
  CHECK(*exact_sqrt(Rat(9, 16)) == Rat(3, 4));
  CHECK(!exact_sqrt(Rat(2, 3)).has_value());
}

TEST_CASE("gaussian rationals") {
  const GaussRat a{Rat(1, 2), Rat(3)};
  const GaussRat b{Rat(2), Rat(-1, 3)};
  CHECK(a.conj() == GaussRat{Rat(1, 2), Rat(-3)});
  CHECK(a.norm2() == Rat(1, 4) + Rat(9));
  CHECK((a + b) == GaussRat{Rat(5, 2), Rat(8, 3)});
  // (1/2 + 3i)(2 - i/3) = 1 + 1 + i(6 - 1/6)
  CHECK((a * b) == GaussRat{Rat(2), Rat(35, 6)});
  CHECK((a * a.conj()).im == 0);
  CHECK((a * a.conj()).re == a.norm2());
}

TEST_CASE("factored rationals") {
  const auto f = FactoredRational::from_rat(Rat(12, 35));
  CHECK(f.factors().at(2) == 2);
  CHECK(f.factors().at(3) == 1);
  CHECK(f.factors().at(5) == -1);
  CHECK(f.factors().at(7) == -1);
  CHECK(f.to_rat() == Rat(12, 35));

  auto g = FactoredRational::from_int(9);
  g.mul(FactoredRational::from_rat(Rat(1, 3)));
  CHECK(g.to_rat() == 3);
  g.div(FactoredRational::from_int(27));
  CHECK(g.to_rat() == Rat(1, 9));
  g.pow(BigInt(-2));
  CHECK(g.to_rat() == 81);

  CHECK(FactoredRational::one().is_one());
  CHECK(FactoredRational::zero().is_zero());
  auto z = FactoredRational::zero();
  z.mul(FactoredRational::from_int(5));
  CHECK(z.is_zero());
  CHECK(z.log() == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(FactoredRational::from_rat(Rat(-1)), invalid_input);

  // Huge exponents never materialize unless asked to.
  auto h = FactoredRational::from_int(3);
  h.pow(BigInt(-2000000));
  CHECK(h.log() == doctest::Approx(-2000000.0 * std::log(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(h.to_rat(1024), resource_limit);

  CHECK(FactoredRational::from_rat(Rat(22, 7)).log() ==
        doctest::Approx(std::log(22.0 / 7.0)).epsilon(1e-12));
  CHECK(FactoredRational::from_rat(Rat(12, 35)).to_string() == "2^2 * 3 * 5^-1 * 7^-1");
}

TEST_CASE("primality") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(!is_prime_u64(1));
  CHECK(!is_prime_u64(561));   // Carmichael
  CHECK(!is_prime_u64(6601));  // Carmichael
  CHECK(is_prime_u64(1000003));
  CHECK(is_prime_u64((1ull << 61) - 1));
  CHECK(!is_prime_u64((1ull << 61) - 3));
  CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
}

TEST_CASE("splitmix64 determinism") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  SplitMix64 c(42), d(43);
  CHECK(c.next() != d.next());
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));

  SplitMix64 r(7);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    mean += z;
    var += z * z;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  SplitMix64 u(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
