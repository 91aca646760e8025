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

#ifndef QBU_ESTIMATORS_HPP
#define QBU_ESTIMATORS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qbu/hilbert.hpp"
#include "qbu/sphere.hpp"

namespace qbu {

class DensityMatrix {
 public:
  // Requires Hermitian within 1e-10, trace 1 within 1e-9, PSD within 1e-9.
  explicit DensityMatrix(CMat m);

  const CMat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  CMat m_;
};

// Bayesian mean state under the Haar prior: entry (i, j) is the posterior
// expectation of psi_i conj(psi_j), computed by expanding the likelihood
// polynomial once and integrating it against each pair of linear factors.
DensityMatrix rho_avg(const ObservationSet& obs, int degree_guard = kDefaultDegreeGuard);

// Exact-rational entries of rho_avg (the pi powers cancel in the ratio of
// sphere integrals); nullopt unless the instance supports exact expansion.
std::optional<std::vector<std::vector<GaussRat>>> rho_avg_exact(
    const ObservationSet& obs, int degree_guard = kDefaultDegreeGuard);

// Likelihood of psi divided by the normalized p_norm: the posterior density
// with respect to the Haar probability measure.
double posterior_density(const ObservationSet& obs, const PureState& psi);

// Posterior expectation of a Hermitian observable: eigendecompose A and sum
// lambda_i * pnorm(obs + |e_i><e_i|) / pnorm(obs).  Equal to Tr[A rho_avg].
double observable_expectation(const ObservationSet& obs, const CMat& a);

// p_norm(obs) reassembled from the prefix with one unit of the last item
// removed: p(obs) = p(prefix) * E_prefix[last observation], with the
// expectation taken through the spectral route above.  Normalized convention.
double pnorm_from_rho_avg(const ObservationSet& obs);

struct MleResult {
  PureState state;
  double log_likelihood = 0.0;
  int restarts_used = 0;
};

// Multi-start projected gradient ascent for max_psi log L(psi).  Start points
// are Haar-random states plus every binarized state when d <= 12.  The result
// is deterministic per seed and is a lower bound on the maximum; no optimality
// claim is made.
MleResult maximize_likelihood(const ObservationSet& obs, int restarts, std::uint64_t seed);

}  // namespace qbu

#endif  // QBU_ESTIMATORS_HPP
