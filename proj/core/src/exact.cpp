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

#include "qbu/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qbu/errors.hpp"

namespace qbu {

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt double_factorial(long long n) {
  if (n <= 0) return 1;
  BigInt r = 1;
  for (long long k = n; k > 1; k -= 2) r *= k;
  return r;
}

BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt r = 1, b = base;
  unsigned long e = exp;
  while (e) {
    if (e & 1ul) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Rat rpow(const Rat& base, long long exp) {
  if (exp < 0) {
    if (base == 0) throw invalid_input("rpow: zero to a negative power");
    return Rat(1) / rpow(base, -exp);
  }
  Rat r = 1, b = base;
  long long e = exp;
  while (e) {
    if (e & 1ll) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

double log_bigint(const BigInt& x) {
  if (x <= 0) throw invalid_input("log_bigint: nonpositive argument");
  const std::size_t bits = msb(x);  // boost: index of highest set bit
  if (bits < 1000) return std::log(x.convert_to<double>());
  // Keep the top 64 bits as a mantissa and account for the shift.
  const std::size_t shift = bits - 63;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_rat(const Rat& x) {
  if (x <= 0) throw invalid_input("log_rat: nonpositive argument");
  return log_bigint(numerator(x)) - log_bigint(denominator(x));
}

double rat_to_double(const Rat& x) { return x.convert_to<double>(); }

std::string rat_to_string(const Rat& x) {
  std::ostringstream os;
  if (denominator(x) == 1) {
    os << numerator(x);
  } else {
    os << numerator(x) << "/" << denominator(x);
  }
  return os.str();
}

Rat rat_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw invalid_input("rat_from_string: zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw invalid_input("rat_from_string: cannot parse '" + s + "'");
  }
}

BigInt isqrt_floor(const BigInt& x) {
  if (x < 0) throw invalid_input("isqrt_floor: negative argument");
  return sqrt(x);
}

std::optional<BigInt> exact_sqrt(const BigInt& x) {
  if (x < 0) return std::nullopt;
  const BigInt r = sqrt(x);
  if (r * r == x) return r;
  return std::nullopt;
}

std::optional<Rat> exact_sqrt(const Rat& x) {
  const auto n = exact_sqrt(numerator(x));
  const auto d = exact_sqrt(denominator(x));
  if (!n || !d) return std::nullopt;
  return Rat(*n, *d);
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1ull) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1ull) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is known to decide primality for all n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredRational FactoredRational::zero() {
  FactoredRational f;
  f.zero_ = true;
  return f;
}

namespace {

// Trial division up to 10^6, then a primality check on the cofactor.  Inputs
// are small by construction (overlap numerators, dimensions, promise bounds),
// so anything that survives trial division and is composite is a caller bug.
void factor_into(const BigInt& value, const BigInt& exponent_sign,
                 std::map<std::int64_t, BigInt>& out) {
  BigInt v = value;
  if (v < 0) throw invalid_input("FactoredRational: negative value");
  for (std::int64_t p = 2; p <= 1000000 && v > 1; p += (p == 2 ? 1 : 2)) {
    if (v % p == 0) {
      BigInt e = 0;
      while (v % p == 0) {
        v /= p;
        ++e;
      }
      out[p] += e * exponent_sign;
      if (out[p] == 0) out.erase(p);
    }
    if (BigInt(p) * p > v) break;
  }
  if (v > 1) {
    if (v > BigInt(std::numeric_limits<std::int64_t>::max()) ||
        !is_prime_u64(v.convert_to<std::uint64_t>())) {
      throw resource_limit("FactoredRational: cofactor too large to factor: " + v.str());
    }
    const auto p = v.convert_to<std::int64_t>();
    out[p] += exponent_sign;
    if (out[p] == 0) out.erase(p);
  }
}

}  // namespace

FactoredRational FactoredRational::from_rat(const Rat& x) {
  if (x < 0) throw invalid_input("FactoredRational: negative value");
  if (x == 0) return zero();
  FactoredRational f;
  factor_into(numerator(x), 1, f.factors_);
  factor_into(denominator(x), -1, f.factors_);
  return f;
}

FactoredRational& FactoredRational::mul(const FactoredRational& o) {
  if (zero_ || o.zero_) {
    zero_ = true;
    factors_.clear();
    return *this;
  }
  for (const auto& [p, e] : o.factors_) {
    factors_[p] += e;
    if (factors_[p] == 0) factors_.erase(p);
  }
  return *this;
}

FactoredRational& FactoredRational::div(const FactoredRational& o) {
  if (o.zero_) throw invalid_input("FactoredRational: division by zero");
  if (zero_) return *this;
  for (const auto& [p, e] : o.factors_) {
    factors_[p] -= e;
    if (factors_[p] == 0) factors_.erase(p);
  }
  return *this;
}

FactoredRational& FactoredRational::pow(const BigInt& e) {
  if (zero_) {
    if (e == 0) {
      zero_ = false;
    } else if (e < 0) {
      throw invalid_input("FactoredRational: zero to a negative power");
    }
    return *this;
  }
  if (e == 0) {
    factors_.clear();
    return *this;
  }
  for (auto& [p, exp] : factors_) exp *= e;
  return *this;
}

double FactoredRational::log() const {
  if (zero_) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (const auto& [p, e] : factors_) {
    acc += e.convert_to<double>() * std::log(static_cast<double>(p));
  }
  return acc;
}

Rat FactoredRational::to_rat(std::size_t max_bits) const {
  if (zero_) return Rat(0);
  double bits = 0;
  for (const auto& [p, e] : factors_) {
    bits += std::abs(e.convert_to<double>()) * std::log2(static_cast<double>(p));
  }
  if (bits > static_cast<double>(max_bits)) {
    throw resource_limit("FactoredRational::to_rat: value needs ~" + std::to_string(static_cast<long long>(bits)) +
                         " bits, guard is " + std::to_string(max_bits));
  }
  BigInt num = 1, den = 1;
  for (const auto& [p, e] : factors_) {
    if (e > 0) {
      num *= ipow(BigInt(p), e.convert_to<unsigned long>());
    } else {
      den *= ipow(BigInt(p), (-e).convert_to<unsigned long>());
    }
  }
  return Rat(num, den);
}

std::string FactoredRational::to_string() const {
  if (zero_) return "0";
  if (factors_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : factors_) {
    if (!first) os << " * ";
    first = false;
    os << p;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

}  // namespace qbu
