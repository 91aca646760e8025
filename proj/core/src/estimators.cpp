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

#include "qbu/estimators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qbu/errors.hpp"

namespace qbu {

namespace {

// integral of p * x_a * x_b over the sphere, term by term.
double integrate_with_pair(const RealPolynomial& p, int a, int b) {
  double acc = 0.0;
  MultiIndex idx;
  for (const auto& [base, c] : p.terms) {
    idx = base;
    idx[a] += 1;
    idx[b] += 1;
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

Rat integrate_with_pair(const RatPolynomial& p, int a, int b) {
  Rat acc = 0;
  MultiIndex idx;
  for (const auto& [base, c] : p.terms) {
    idx = base;
    idx[a] += 1;
    idx[b] += 1;
    const auto r = monomial_sphere_integral(idx, p.num_vars);
    if (!r.is_zero()) acc += c * r.coeff;
  }
  return acc;
}

}  // namespace

DensityMatrix::DensityMatrix(CMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw invalid_input("DensityMatrix: need a square matrix");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw invalid_input("DensityMatrix: matrix is not Hermitian");
  if (std::abs(m_.trace().real() - 1.0) > 1e-9)
    throw invalid_input("DensityMatrix: trace must be 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw invalid_input("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix rho_avg(const ObservationSet& obs, int degree_guard) {
  const int d = obs.dim();
  if (d < 1) throw invalid_input("rho_avg: empty observation set");
  const RealPolynomial p = likelihood_polynomial(obs, degree_guard);
  const double den = integrate_polynomial(p);
  if (!(den > 0.0)) throw conditioning_error("rho_avg: vanishing normalization");
  CMat rho(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      // psi_i conj(psi_j) = (u_i u_j + w_i w_j) + i (w_i u_j - u_i w_j).
      const double re = integrate_with_pair(p, i, j) + integrate_with_pair(p, d + i, d + j);
      const double im = integrate_with_pair(p, d + i, j) - integrate_with_pair(p, i, d + j);
      rho(i, j) = Complex(re / den, im / den);
      rho(j, i) = std::conj(rho(i, j));
    }
  }
  return DensityMatrix(std::move(rho));
}

std::optional<std::vector<std::vector<GaussRat>>> rho_avg_exact(const ObservationSet& obs,
                                                                int degree_guard) {
  const int d = obs.dim();
  if (d < 1) throw invalid_input("rho_avg: empty observation set");
  const auto p = likelihood_polynomial_exact(obs, degree_guard);
  if (!p) return std::nullopt;
  const SphereIntegral den = integrate_polynomial(*p);
  if (den.is_zero()) throw conditioning_error("rho_avg: vanishing normalization");
  std::vector<std::vector<GaussRat>> rho(d, std::vector<GaussRat>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Rat re = integrate_with_pair(*p, i, j) + integrate_with_pair(*p, d + i, d + j);
      const Rat im = integrate_with_pair(*p, d + i, j) - integrate_with_pair(*p, i, d + j);
      rho[i][j] = GaussRat{re / den.coeff, im / den.coeff};
      rho[j][i] = rho[i][j].conj();
    }
  }
  return rho;
}

double posterior_density(const ObservationSet& obs, const PureState& psi) {
  const double ll = log_likelihood(psi, obs);
  if (ll == -std::numeric_limits<double>::infinity()) return 0.0;
  const double mean = pnorm_exact(obs, Convention::normalized).value;
  if (!(mean > 0.0)) throw conditioning_error("posterior_density: vanishing normalization");
  return std::exp(ll) / mean;
}

double observable_expectation(const ObservationSet& obs, const CMat& a) {
  const int d = obs.dim();
  if (d < 1) throw invalid_input("observable_expectation: empty observation set");
  if (a.rows() != d || a.cols() != d)
    throw invalid_input("observable_expectation: dimension mismatch");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw invalid_input("observable_expectation: observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  const double den = pnorm_exact(obs, Convention::normalized).value;
  if (!(den > 0.0))
    throw conditioning_error("observable_expectation: vanishing normalization");
  double acc = 0.0;
  for (int k = 0; k < d; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda == 0.0) continue;
    ObservationSet ext(d);
    for (const auto& it : obs.items()) ext.add(it.obs, it.multiplicity);
    ext.add(Observation::rank_one(es.eigenvectors().col(k)));
    const double num = pnorm_exact(ext, Convention::normalized).value;
    acc += lambda * num / den;
  }
  return acc;
}

double pnorm_from_rho_avg(const ObservationSet& obs) {
  if (obs.empty()) return 1.0;
  const int d = obs.dim();
  ObservationSet prefix(d);
  const auto& items = obs.items();
  for (std::size_t i = 0; i + 1 < items.size(); ++i)
    prefix.add(items[i].obs, items[i].multiplicity);
  const auto& last = items.back();
  if (last.multiplicity > 1) prefix.add(last.obs, last.multiplicity - 1);
  const double factor = observable_expectation(prefix, last.obs.matrix());
  const double base = prefix.empty() ? 1.0 : pnorm_exact(prefix, Convention::normalized).value;
  return base * factor;
}

namespace {

CVec ascent_direction(const ObservationSet& obs, const PureState& psi) {
  const int d = obs.dim();
  CVec g = CVec::Zero(d);
  for (const auto& it : obs.items()) {
    // Clamped so an exactly vanishing factor still yields a finite push
    // toward reviving it.
    const double e = std::max(it.obs.expectation(psi), 1e-300);
    if (it.obs.kind() == Observation::Kind::rank_one) {
      const CVec& v = it.obs.vector();
      g += (static_cast<double>(it.multiplicity) / e) * (v.dot(psi.vector())) * v;
    } else {
      g += (static_cast<double>(it.multiplicity) / e) * (it.obs.matrix() * psi.vector());
    }
  }
  return g;
}

PureState ascend(const ObservationSet& obs, PureState psi, double* best_ll) {
  double ll = log_likelihood(psi, obs);
  double step = 1.0 / static_cast<double>(std::max<long long>(1, obs.total_multiplicity()));
  for (int iter = 0; iter < 500; ++iter) {
    CVec g = ascent_direction(obs, psi);
    // Tangent component: the radial part only rescales.
    g -= psi.vector().dot(g) * psi.vector();
    const double gn = g.norm();
    if (gn < 1e-12) break;
    bool improved = false;
    while (step > 1e-14) {
      const CVec trial = psi.vector() + step * g;
      const PureState cand = PureState::normalized(trial);
      const double cll = log_likelihood(cand, obs);
      if (cll > ll) {
        psi = cand;
        ll = cll;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  *best_ll = ll;
  return psi;
}

}  // namespace

MleResult maximize_likelihood(const ObservationSet& obs, int restarts, std::uint64_t seed) {
  const int d = obs.dim();
  if (d < 1) throw invalid_input("maximize_likelihood: empty observation set");
  if (restarts < 0) throw invalid_input("maximize_likelihood: negative restart count");

  std::vector<PureState> starts;
  if (d <= 12) {
    for (std::uint64_t k = 0; k < (1ull << (d - 1)); ++k)
      starts.push_back(b0_state(SignVector::from_index(d, k)));
  }
  SplitMix64 rng(seed);
  for (int r = 0; r < restarts; ++r) starts.push_back(random_pure_state(d, rng));
  if (starts.empty())
    throw invalid_input("maximize_likelihood: need at least one start point");

  double best_ll = -std::numeric_limits<double>::infinity();
  std::optional<PureState> best;
  for (const auto& s : starts) {
    double ll = 0.0;
    PureState out = ascend(obs, s, &ll);
    if (!best || ll > best_ll) {
      best_ll = ll;
      best = std::move(out);
    }
  }
  MleResult res{std::move(*best), best_ll, static_cast<int>(starts.size())};
  return res;
}

}  // namespace qbu
