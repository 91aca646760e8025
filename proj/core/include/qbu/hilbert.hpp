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

#ifndef QBU_HILBERT_HPP
#define QBU_HILBERT_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qbu/exact.hpp"
#include "qbu/rng.hpp"

namespace qbu {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Unnormalized vector with Gaussian-rational entries.  Squared overlaps of two
// such vectors are exactly rational (the norms enter squared), which is what
// the exact likelihood paths consume.  Kept unnormalized on purpose: the
// normalizing constants (sqrt d, sqrt 2, sqrt 6, ...) are irrational.
struct ExactVector {
  std::vector<GaussRat> entries;

  int dim() const { return static_cast<int>(entries.size()); }
  Rat norm2() const;
};

// |<a|b>|^2 / (|a|^2 |b|^2), exact.
Rat exact_squared_overlap(const ExactVector& a, const ExactVector& b);

class PureState {
 public:
  // Requires |v| = 1 within 1e-12.
  explicit PureState(CVec v);
  // Normalizes; throws invalid_input on the zero vector.
  static PureState normalized(const CVec& v);

  const CVec& vector() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

  // Present when the state was built from exact data (binarized states, basis
  // vectors, rational perturbations).  Unnormalized.
  std::optional<ExactVector> exact;

 private:
  CVec v_;
};

class Observation {
 public:
  enum class Kind { rank_one, general };

  // Normalizes v; the observation is the projector v v^dagger.
  static Observation rank_one(const CVec& v);
  // Requires m Hermitian and PSD within 1e-10.
  static Observation general(const CMat& m);

  Kind kind() const { return kind_; }
  int dim() const;
  // Rank-one only; the stored unit vector.
  const CVec& vector() const;
  // The operator as a dense matrix (projector for rank-one).
  CMat matrix() const;
  double trace() const;
  // <psi| O |psi>.
  double expectation(const PureState& psi) const;

  // Unnormalized exact form of the rank-one vector, when available.
  std::optional<ExactVector> exact;

 private:
  Observation() = default;
  Kind kind_ = Kind::rank_one;
  CVec v_;
  CMat m_;
};

// Spec'd operation name for Observation::rank_one.
Observation projector_from_vector(const CVec& v);

struct ObservationItem {
  Observation obs;
  long long multiplicity = 1;
};

// A collection of observations with integer multiplicities, all of one
// dimension.  Multiplicities are never materialized as repeats; downstream
// algebra works on exponents.
class ObservationSet {
 public:
  // Zero-dimensional placeholder, for aggregate members filled in later.
  ObservationSet() = default;
  explicit ObservationSet(int d);

  void add(Observation obs, long long multiplicity = 1);
  int dim() const { return d_; }
  const std::vector<ObservationItem>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  // Sum of multiplicities: the n in "n observations".
  long long total_multiplicity() const;
  bool all_rank_one() const;
  bool all_exact() const;

 private:
  int d_ = 0;
  std::vector<ObservationItem> items_;
};

// Sum of multiplicity * ln <psi|O|psi>; -infinity if any factor vanishes.
double log_likelihood(const PureState& psi, const ObservationSet& obs);

// Exact likelihood as a factored rational; nullopt unless the state and every
// observation carry exact vectors.
std::optional<FactoredRational> exact_likelihood(const ExactVector& psi,
                                                 const ObservationSet& obs);

// Log of the exact likelihood without factoring the overlaps; usable for
// states whose rational entries are not smooth numbers.  -infinity on a zero
// factor; nullopt when exact data is missing.
std::optional<double> exact_log_likelihood(const ExactVector& psi,
                                           const ObservationSet& obs);

// d values in {+1,-1}, first fixed +1 as the global-phase gauge.  Ordered by
// index(), which reads signs[1..] as bits (+1 = 0); that order is also the
// lexicographic order used for tie-breaking.
struct SignVector {
  std::vector<int> signs;

  static SignVector from_index(int d, std::uint64_t index);
  std::uint64_t index() const;
  int dim() const { return static_cast<int>(signs.size()); }
  bool operator==(const SignVector& o) const { return signs == o.signs; }
};

// (s_1|1> + s_2|2> + ... + s_d|d>)/sqrt(d); carries its exact form.
PureState b0_state(const SignVector& s);

// The d^2 rank-one observations |k><k| for each k plus the projectors onto
// (|j> + i|k>)/sqrt(2) and (|j> - i|k>)/sqrt(2) for each pair j < k.  Every
// squared overlap with a binarized state is exactly 1/d, so one full set
// applied to such a state has likelihood d^(-d^2).
ObservationSet basic_observation_set(int d);

// Amplitude/phase coordinates of a unit state: entry k is
// sqrt(alpha_k/d) * exp(i*pi*(theta_k + n_k)) up to a global phase fixed by
// zeroing the phase of the first nonzero entry (gauge_index records which).
struct StateCoords {
  std::vector<double> alpha;  // nonnegative, sums to d
  std::vector<double> theta;  // in [-1/2, 1/2)
  std::vector<int> n;         // bits
  int gauge_index = 0;
};

StateCoords state_coords(const PureState& psi);
PureState state_from_coords(const StateCoords& c);

struct B0Distance {
  SignVector sign;
  double distance = 0.0;
};

// Euclidean distance from psi to the nearest binarized state, minimized over
// the global phase: min_s sqrt(2 - 2|<b_s|psi>|).  Ties go to the
// lexicographically smallest sign vector.
B0Distance dist_to_b0(const PureState& psi);

// Haar-random pure state (normalized complex Gaussian vector).
PureState random_pure_state(int d, SplitMix64& rng);

}  // namespace qbu

#endif  // QBU_HILBERT_HPP
