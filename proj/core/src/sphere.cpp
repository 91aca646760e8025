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

#include "qbu/sphere.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "qbu/errors.hpp"

namespace qbu {

namespace {
constexpr double kPi = 3.14159265358979323846;

template <typename T>
Polynomial<T> poly_one(int num_vars) {
  Polynomial<T> p;
  p.num_vars = num_vars;
  p.terms.emplace(MultiIndex(num_vars, 0u), T(1));
  return p;
}

template <typename T>
Polynomial<T> poly_mul(const Polynomial<T>& a, const Polynomial<T>& b) {
  Polynomial<T> out;
  out.num_vars = a.num_vars;
  MultiIndex idx(a.num_vars);
  for (const auto& [ia, ca] : a.terms) {
    for (const auto& [ib, cb] : b.terms) {
      for (int j = 0; j < a.num_vars; ++j) idx[j] = ia[j] + ib[j];
      out.add_term(idx, ca * cb);
    }
  }
  return out;
}

// <x|M|x> with x = u + i*w as a degree-2 polynomial in (u_1..u_d, w_1..w_d):
// sum_jk Re(M_jk)(u_j u_k + w_j w_k) - Im(M_jk)(u_j w_k - w_j u_k).
template <typename T, typename GetRe, typename GetIm>
Polynomial<T> quadratic_form(int d, GetRe re, GetIm im) {
  Polynomial<T> q;
  q.num_vars = 2 * d;
  MultiIndex idx(2 * d, 0u);
  auto add = [&](int a, int b, const T& c) {
    idx.assign(2 * d, 0u);
    idx[a] += 1;
    idx[b] += 1;
    q.add_term(idx, c);
  };
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const T r = re(j, k);
      if (!(r == T(0))) {
        add(j, k, r);          // u_j u_k
        add(d + j, d + k, r);  // w_j w_k
      }
      const T i = im(j, k);
      if (!(i == T(0))) {
        add(j, d + k, T(0) - i);  // -Im u_j w_k
        add(d + j, k, i);         // +Im w_j u_k
      }
    }
  }
  return q;
}

template <typename T>
Polynomial<T> expand_product(const ObservationSet& obs, int degree_guard,
                             ExpansionStats* stats,
                             const std::vector<Polynomial<T>>& factors) {
  const long long degree = 2 * obs.total_multiplicity();
  if (degree > degree_guard)
    throw resource_limit("likelihood polynomial degree " + std::to_string(degree) +
                         " exceeds the guard of " + std::to_string(degree_guard));
  Polynomial<T> acc = poly_one<T>(2 * obs.dim());
  if (stats) {
    stats->peak_terms = acc.size();
    stats->terms_per_factor.clear();
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const long long mult = obs.items()[i].multiplicity;
    for (long long r = 0; r < mult; ++r) {
      acc = poly_mul(acc, factors[i]);
      if (stats) {
        stats->peak_terms = std::max(stats->peak_terms, acc.size());
        stats->terms_per_factor.push_back(acc.size());
      }
    }
  }
  return acc;
}
}  // namespace

unsigned total_degree(const MultiIndex& idx) {
  unsigned s = 0;
  for (unsigned e : idx) s += e;
  return s;
}

double SphereIntegral::value() const {
  return rat_to_double(coeff) * std::pow(kPi, static_cast<double>(pi_power));
}

SphereIntegral monomial_sphere_integral(const MultiIndex& idx, int m) {
  if (m < 1) throw invalid_input("monomial_sphere_integral: need at least one variable");
  if (static_cast<int>(idx.size()) > m)
    throw invalid_input("monomial_sphere_integral: more exponents than variables");
  SphereIntegral out;
  out.pi_power = static_cast<unsigned>(m / 2);
  for (unsigned e : idx) {
    if (e % 2 != 0) {
      out.coeff = 0;
      return out;
    }
  }
  // All exponents even, a_i = 2 k_i.  With K = sum k_i the gamma factors
  // reduce through Gamma(k + 1/2) = (2k-1)!!/2^k * sqrt(pi); the sqrt(pi)
  // powers regroup into pi^floor(m/2) for both parities of m.
  long long K = 0;
  BigInt dfact_prod = 1;
  for (unsigned e : idx) {
    const long long k = e / 2;
    K += k;
    dfact_prod *= double_factorial(2 * k - 1);
  }
  const Rat p = Rat(dfact_prod) / Rat(ipow(BigInt(2), K));
  const long long q = m / 2;
  if (m % 2 == 0) {
    out.coeff = 2 * p / Rat(factorial(static_cast<unsigned>(K + q - 1)));
  } else {
    out.coeff = 2 * p * Rat(ipow(BigInt(2), K + q)) / Rat(double_factorial(2 * (K + q) - 1));
  }
  return out;
}

SphereIntegral sphere_area(int m) { return monomial_sphere_integral({}, m); }

RealPolynomial likelihood_polynomial(const ObservationSet& obs, int degree_guard,
                                     ExpansionStats* stats) {
  if (obs.dim() < 1) throw invalid_input("likelihood_polynomial: empty observation set");
  const int d = obs.dim();
  std::vector<RealPolynomial> factors;
  factors.reserve(obs.items().size());
  for (const auto& it : obs.items()) {
    const CMat m = it.obs.matrix();
    factors.push_back(quadratic_form<double>(
        d, [&](int j, int k) { return m(j, k).real(); },
        [&](int j, int k) { return m(j, k).imag(); }));
  }
  return expand_product(obs, degree_guard, stats, factors);
}

std::optional<RatPolynomial> likelihood_polynomial_exact(const ObservationSet& obs,
                                                         int degree_guard,
                                                         ExpansionStats* stats) {
  if (obs.dim() < 1) throw invalid_input("likelihood_polynomial: empty observation set");
  if (!obs.all_exact()) return std::nullopt;
  const int d = obs.dim();
  std::vector<RatPolynomial> factors;
  factors.reserve(obs.items().size());
  for (const auto& it : obs.items()) {
    const ExactVector& v = *it.obs.exact;
    if (v.dim() != d) throw invalid_input("likelihood_polynomial: exact dimension mismatch");
    const Rat n2 = v.norm2();
    if (n2 == 0) throw invalid_input("likelihood_polynomial: zero exact vector");
    // Projector entries v_j conj(v_k) / |v|^2.
    auto entry = [&](int j, int k) { return v.entries[j] * v.entries[k].conj(); };
    factors.push_back(quadratic_form<Rat>(
        d, [&](int j, int k) { return entry(j, k).re / n2; },
        [&](int j, int k) { return entry(j, k).im / n2; }));
  }
  return expand_product(obs, degree_guard, stats, factors);
}

double integrate_polynomial(const RealPolynomial& p) {
  double acc = 0.0;
  for (const auto& [idx, c] : p.terms) {
    bool odd = false;
    for (unsigned e : idx)
      if (e % 2 != 0) {
        odd = true;
        break;
      }
    if (odd) continue;
    acc += c * monomial_sphere_integral(idx, p.num_vars).value();
  }
  return acc;
}

SphereIntegral integrate_polynomial(const RatPolynomial& p) {
  SphereIntegral out;
  out.pi_power = static_cast<unsigned>(p.num_vars / 2);
  for (const auto& [idx, c] : p.terms) {
    const SphereIntegral term = monomial_sphere_integral(idx, p.num_vars);
    if (!term.is_zero()) out.coeff += c * term.coeff;
  }
  return out;
}

PnormResult pnorm_exact(const ObservationSet& obs, Convention convention,
                        int degree_guard) {
  PnormResult out;
  out.convention = convention;
  const int m = 2 * obs.dim();
  const SphereIntegral area = sphere_area(m);
  if (auto rp = likelihood_polynomial_exact(obs, degree_guard)) {
    SphereIntegral raw = integrate_polynomial(*rp);
    if (convention == Convention::normalized) {
      raw.coeff /= area.coeff;
      raw.pi_power = 0;
    }
    out.exact = raw;
    out.value = raw.value();
    return out;
  }
  const RealPolynomial p = likelihood_polynomial(obs, degree_guard);
  double raw = integrate_polynomial(p);
  if (convention == Convention::normalized) raw /= area.value();
  out.value = raw;
  return out;
}

McResult pnorm_montecarlo(const ObservationSet& obs, long long samples,
                          std::uint64_t seed, int threads) {
  if (samples < 1) throw invalid_input("pnorm_montecarlo: need at least one sample");
  if (obs.dim() < 1) throw invalid_input("pnorm_montecarlo: empty observation set");
  const int d = obs.dim();
  constexpr long long kChunk = 4096;
  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);

  auto run_chunk = [&](long long c) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    const long long lo = c * kChunk;
    const long long hi = std::min(samples, lo + kChunk);
    double s = 0.0, s2 = 0.0;
    for (long long i = lo; i < hi; ++i) {
      const PureState psi = random_pure_state(d, rng);
      double lF = 0.0;
      bool zero = false;
      for (const auto& it : obs.items()) {
        const double e = it.obs.expectation(psi);
        if (!(e > 0.0)) {
          zero = true;
          break;
        }
        lF += static_cast<double>(it.multiplicity) * std::log(e);
      }
      const double L = zero ? 0.0 : std::exp(lF);
      s += L;
      s2 += L * L;
    }
    sum[c] = s;
    sum2[c] = s2;
  };

  const int workers = static_cast<int>(
      std::min<long long>(chunks, std::max(1, threads)));
  if (workers <= 1) {
    for (long long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const long long c = next.fetch_add(1);
          if (c >= chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Chunk order is fixed, so the combined sums are independent of the number
  // of worker threads.
  double s = 0.0, s2 = 0.0;
  for (long long c = 0; c < chunks; ++c) {
    s += sum[c];
    s2 += sum2[c];
  }
  McResult out;
  out.samples = samples;
  out.estimate = s / static_cast<double>(samples);
  const double var = std::max(0.0, s2 / static_cast<double>(samples) -
                                       out.estimate * out.estimate);
  out.std_error = std::sqrt(var / static_cast<double>(samples));
  return out;
}

}  // namespace qbu
