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

#ifndef QBU_MATCHPERM_HPP
#define QBU_MATCHPERM_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qbu/errors.hpp"
#include "qbu/exact.hpp"
#include "qbu/hilbert.hpp"

namespace qbu {

// Minimal dense matrix over an arbitrary scalar (double, Rat, BigInt).  The
// exact counting paths cannot use Eigen's fixed scalar set, and the matrices
// here are small enough that nothing fancier is warranted.
template <typename T>
class Dense {
 public:
  Dense() = default;
  Dense(int rows, int cols, const T& init = T(0))
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, init) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  Dense transpose() const {
    Dense t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <typename U>
  Dense<U> cast() const {
    Dense<U> c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) c(i, j) = static_cast<U>((*this)(i, j));
    return c;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Dense<Rat>;

Dense<double> rat_to_double_matrix(const RatMatrix& m);

inline constexpr int kPairingGuard = 20;       // memoized pairing sum
inline constexpr int kPairingEnumGuard = 12;   // explicit enumeration oracle
inline constexpr int kRyserGuard = 22;         // Ryser permanent
inline constexpr int kPermBruteGuard = 9;      // permutation-sum oracle

// Sum over perfect pairings P of {0..2n-1} of prod_{(i,j) in P} S[i][j]
// (the hafnian).  Memoized recursion on the lowest unpaired index.
template <typename T>
T pairing_sum(const Dense<T>& s) {
  const int m = s.rows();
  if (m != s.cols() || m % 2 != 0) throw invalid_input("pairing_sum: need even square matrix");
  if (m > kPairingGuard) throw resource_limit("pairing_sum: size exceeds guard");
  if (m == 0) return T(1);
  std::unordered_map<std::uint32_t, T> memo;
  const std::uint32_t full = (m >= 32) ? 0xffffffffu : ((1u << m) - 1u);
  auto rec = [&](auto&& self, std::uint32_t mask) -> T {
    if (mask == 0) return T(1);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int i = __builtin_ctz(mask);
    const std::uint32_t rest = mask & ~(1u << i);
    T acc(0);
    for (std::uint32_t r = rest; r != 0; r &= r - 1) {
      const int j = __builtin_ctz(r);
      acc += s(i, j) * self(self, rest & ~(1u << j));
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(rec, full);
}

// Same sum by explicit enumeration of all (2n-1)!! pairings; the oracle the
// memoized version is tested against.
template <typename T>
T pairing_sum_enumerate(const Dense<T>& s) {
  const int m = s.rows();
  if (m != s.cols() || m % 2 != 0)
    throw invalid_input("pairing_sum_enumerate: need even square matrix");
  if (m > kPairingEnumGuard) throw resource_limit("pairing_sum_enumerate: size exceeds guard");
  if (m == 0) return T(1);
  std::vector<int> avail(m);
  for (int i = 0; i < m; ++i) avail[i] = i;
  T total(0);
  auto rec = [&](auto&& self, std::vector<int>& left, const T& prod) -> void {
    if (left.empty()) {
      total += prod;
      return;
    }
    const int i = left.front();
    for (std::size_t k = 1; k < left.size(); ++k) {
      const int j = left[k];
      std::vector<int> rest;
      rest.reserve(left.size() - 2);
      for (std::size_t t = 1; t < left.size(); ++t)
        if (t != k) rest.push_back(left[t]);
      T p = prod * s(i, j);
      self(self, rest, p);
    }
  };
  rec(rec, avail, T(1));
  return total;
}

// Ryser's formula with Gray-code subset updates.
template <typename T>
T permanent(const Dense<T>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw invalid_input("permanent: need square matrix");
  if (n > kRyserGuard) throw resource_limit("permanent: size exceeds guard");
  if (n == 0) return T(1);
  std::vector<T> row_sum(n, T(0));
  T total(0);
  std::uint32_t prev = 0;
  const std::uint64_t count = 1ull << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::uint32_t gray = static_cast<std::uint32_t>(k ^ (k >> 1));
    const std::uint32_t diff = gray ^ prev;
    const int j = __builtin_ctz(diff);
    if (gray & diff) {
      for (int i = 0; i < n; ++i) row_sum[i] += a(i, j);
    } else {
      for (int i = 0; i < n; ++i) row_sum[i] -= a(i, j);
    }
    prev = gray;
    T prod(1);
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    if ((n - __builtin_popcount(gray)) % 2 == 0) {
      total += prod;
    } else {
      total -= prod;
    }
  }
  return total;
}

// Permutation-expansion oracle.
template <typename T>
T permanent_bruteforce(const Dense<T>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw invalid_input("permanent_bruteforce: need square matrix");
  if (n > kPermBruteGuard) throw resource_limit("permanent_bruteforce: size exceeds guard");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  T total(0);
  auto rec = [&](auto&& self, int i, const T& prod) -> void {
    if (i == n) {
      total += prod;
      return;
    }
    for (int k = i; k < n; ++k) {
      std::swap(perm[i], perm[k]);
      T p = prod * a(i, perm[i]);
      self(self, i + 1, p);
      std::swap(perm[i], perm[k]);
    }
  };
  rec(rec, 0, T(1));
  return total;
}

// 2n x 2n real symmetric matrix whose rows and columns repeat in adjacent
// pairs (row 2k = row 2k+1, likewise columns).  The Gram construction below
// produces these with unit diagonal.
class DoubledMatrix {
 public:
  explicit DoubledMatrix(Dense<double> m, double tol = 1e-12);

  const Dense<double>& matrix() const { return m_; }
  int size() const { return m_.rows(); }
  bool unit_diagonal() const { return unit_diagonal_; }

 private:
  Dense<double> m_;
  bool unit_diagonal_ = false;
};

void validate_doubled_rational(const RatMatrix& m);

// Real embedding r(v) = (Re v, -Im v) of each rank-one observation vector,
// each repeated twice (multiplicity-expanded): entry (i, j) is
// r(v_floor(i/2)) . r(v_floor(j/2)).  Unit vectors give a unit diagonal.
DoubledMatrix gram_from_observations(const ObservationSet& obs);

// Normalization constant relating the surface integral of a product of 2n
// linear forms over S^(2d-1) to the pairing sum of their Gram matrix.
// Derived from the monomial integral: C = (integral of x_1^(2n)) / (2n-1)!!
// = 2 pi^d / (2^n (d+n-1)!).  A differing printed form circulates with the
// construction this implements, so both are carried and compared, never
// silently swapped.
struct WickConstant {
  int d = 1, n = 0;
  Rat coeff{0};            // derived value = coeff * pi^d
  Rat printed_coeff{0};    // the printed form 2 * 2^n / (d+n-1)!, times pi^d
  double value() const;
  double printed_value() const;
};

WickConstant wick_constant(int d, int n);

// wick_constant(d, n) * pairing_sum(gram_from_observations(obs)): the pairing
// formula for the raw-convention surface integral of the likelihood.  How this
// relates to pnorm_exact for complex instances is measured by the comparison
// table in the verify suites, not assumed here.
double pnorm_via_pairings(const ObservationSet& obs);

enum class ExtractTarget { pairing, permanent };

struct ExtractOptions {
  ExtractTarget target = ExtractTarget::permanent;
  bool chebyshev_nodes = false;
};

// Evaluates the chosen functional of A'(alpha) = I[2] + alpha (A - I[2]) at
// degree+1 nodes in (0, alpha_max] and interpolates the leading coefficient,
// which equals the same functional of A - I[2].  I[2] is the identity in the
// doubled sense: ones on the 2x2 diagonal blocks.  alpha_max is 1/|lambda_min|
// of A - I[2] when that eigenvalue is negative (the largest alpha keeping
// A'(alpha) PSD), else 1.  In alpha, the permanent has degree size and the
// pairing sum degree size/2.
double extract_base_permanent(const DoubledMatrix& a, const ExtractOptions& opts = {});

// Exact-rational variant; the caller supplies alpha_max (typically a rational
// underestimate of the PSD bound).  Interpolation is exact, so conditioning
// is not a concern here.
Rat extract_base_rational(const RatMatrix& a, const Rat& alpha_max, ExtractTarget target);

// Smallest eigenvalue of a symmetric matrix (float path helper).
double min_eigenvalue_sym(const Dense<double>& m);

}  // namespace qbu

#endif  // QBU_MATCHPERM_HPP
