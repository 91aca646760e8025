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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace qbu {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned n);

// (n)!! with the usual empty-product conventions: (-1)!! = 0!! = 1.
BigInt double_factorial(long long n);

BigInt ipow(const BigInt& base, unsigned long exp);
Rat rpow(const Rat& base, long long exp);

// Natural log of a positive big integer, accurate to ~1e-15 relative.
double log_bigint(const BigInt& x);
double log_rat(const Rat& x);
double rat_to_double(const Rat& x);

std::string rat_to_string(const Rat& x);       // "3/4", "-2", "0"
Rat rat_from_string(const std::string& s);     // accepts "p", "p/q"

// Floor of sqrt, plus exact-square detection.
BigInt isqrt_floor(const BigInt& x);
std::optional<BigInt> exact_sqrt(const BigInt& x);
std::optional<Rat> exact_sqrt(const Rat& x);

// Exact complex number with rational real and imaginary parts.
struct GaussRat {
  Rat re{0};
  Rat im{0};

  GaussRat() = default;
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussRat(long long r) : re(r), im(0) {}

  GaussRat conj() const { return {re, -im}; }
  Rat norm2() const { return re * re + im * im; }

  GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
  GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
  GaussRat operator*(const GaussRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
};

// A nonnegative rational held as a sparse prime factorization, so that numbers
// like d^(-K1*d^2) with K1 in the millions stay cheap to multiply, compare and
// take logs of.  Zero is representable (absorbing under multiplication).
class FactoredRational {
 public:
  FactoredRational() = default;        // one

  static FactoredRational one() { return {}; }
  static FactoredRational zero();
  static FactoredRational from_rat(const Rat& x);       // throws invalid_input if x < 0
  static FactoredRational from_int(long long x) { return from_rat(Rat(x)); }

  bool is_zero() const { return zero_; }
  bool is_one() const { return !zero_ && factors_.empty(); }

  FactoredRational& mul(const FactoredRational& o);
  FactoredRational& mul_rat(const Rat& x) { return mul(from_rat(x)); }
  FactoredRational& div(const FactoredRational& o);
  FactoredRational& pow(const BigInt& e);

  bool operator==(const FactoredRational& o) const {
    return zero_ == o.zero_ && factors_ == o.factors_;
  }

  // Natural log; -inf for zero.
  double log() const;

  // Materializes the rational.  Guarded: throws resource_limit if the result
  // would exceed roughly max_bits bits.
  Rat to_rat(std::size_t max_bits = 1u << 20) const;

  const std::map<std::int64_t, BigInt>& factors() const { return factors_; }
  std::string to_string() const;       // "2^3 * 5^-1" style, or "0" / "1"

 private:
  bool zero_ = false;
  std::map<std::int64_t, BigInt> factors_;   // prime -> nonzero exponent
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

}  // namespace qbu
