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

#ifndef QBU_SPHERE_HPP
#define QBU_SPHERE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qbu/exact.hpp"
#include "qbu/hilbert.hpp"

namespace qbu {

// Exponent vector of a monomial; one slot per real variable.
using MultiIndex = std::vector<unsigned>;

unsigned total_degree(const MultiIndex& idx);

// Exact value of the form coeff * pi^pi_power.  Surface integrals of even
// monomials over S^(m-1) always reduce to this shape with pi_power = floor(m/2).
struct SphereIntegral {
  Rat coeff{0};
  unsigned pi_power = 0;

  double value() const;
  bool is_zero() const { return coeff == 0; }
};

// Integral of prod_i x_i^idx[i] over the unit sphere S^(m-1) in R^m with the
// surface (unnormalized) measure: zero when any exponent is odd, else
// 2 * prod Gamma((a_i+1)/2) / Gamma(sum (a_i+1)/2), evaluated in exact
// half-integer arithmetic.
SphereIntegral monomial_sphere_integral(const MultiIndex& idx, int m);

// Surface area of S^(m-1): 2 pi^(m/2) / Gamma(m/2).
SphereIntegral sphere_area(int m);

// Sparse polynomial over num_vars real variables.
template <typename T>
struct Polynomial {
  int num_vars = 0;
  std::map<MultiIndex, T> terms;

  void add_term(const MultiIndex& idx, const T& c) {
    auto it = terms.find(idx);
    if (it == terms.end()) {
      if (!(c == T(0))) terms.emplace(idx, c);
    } else {
      it->second += c;
      if (it->second == T(0)) terms.erase(it);
    }
  }
  std::size_t size() const { return terms.size(); }
};

using RealPolynomial = Polynomial<double>;
using RatPolynomial = Polynomial<Rat>;

// Intermediate-size telemetry from the observation-by-observation expansion.
struct ExpansionStats {
  std::size_t peak_terms = 0;
  std::vector<std::size_t> terms_per_factor;
};

inline constexpr int kDefaultDegreeGuard = 24;

// Expands prod_i <x|O_i|x>^mult_i as a homogeneous polynomial of degree 2n in
// the 2d real coordinates of x, laid out as (Re x_1..Re x_d, Im x_1..Im x_d).
// Throws resource_limit when 2n exceeds degree_guard.
RealPolynomial likelihood_polynomial(const ObservationSet& obs,
                                     int degree_guard = kDefaultDegreeGuard,
                                     ExpansionStats* stats = nullptr);

// Same expansion with exact rational coefficients; nullopt unless every
// observation carries an exact vector.
std::optional<RatPolynomial> likelihood_polynomial_exact(
    const ObservationSet& obs, int degree_guard = kDefaultDegreeGuard,
    ExpansionStats* stats = nullptr);

// Term-by-term surface integral over S^(2d-1).
double integrate_polynomial(const RealPolynomial& p);
SphereIntegral integrate_polynomial(const RatPolynomial& p);

// raw: surface integral of the likelihood.  normalized: divided by the sphere
// area, i.e. the Haar-probability mean of the likelihood.  The two are never
// mixed silently; every result records which one it is.
enum class Convention { raw, normalized };

struct PnormResult {
  double value = 0.0;
  Convention convention = Convention::normalized;
  // Exact form when the instance supports rational expansion.  Under the
  // normalized convention the pi powers cancel and this is plain rational.
  std::optional<SphereIntegral> exact;
};

PnormResult pnorm_exact(const ObservationSet& obs,
                        Convention convention = Convention::normalized,
                        int degree_guard = kDefaultDegreeGuard);

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

// Mean likelihood over Haar-random pure states (the normalized convention),
// with the standard error of the mean.  Samples are drawn in fixed-size
// chunks with per-chunk seeds and combined in chunk order, so the result
// depends on the seed only, not on the thread count.
McResult pnorm_montecarlo(const ObservationSet& obs, long long samples,
                          std::uint64_t seed, int threads = 1);

}  // namespace qbu

#endif  // QBU_SPHERE_HPP
