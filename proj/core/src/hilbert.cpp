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

#include "qbu/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qbu/errors.hpp"

namespace qbu {

namespace {
constexpr double kUnitNormTol = 1e-12;
constexpr double kHermitianTol = 1e-10;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

Rat ExactVector::norm2() const {
  Rat acc = 0;
  for (const auto& e : entries) acc += e.norm2();
  return acc;
}

Rat exact_squared_overlap(const ExactVector& a, const ExactVector& b) {
  if (a.dim() != b.dim()) throw invalid_input("exact_squared_overlap: dimension mismatch");
  GaussRat ip;
  for (int k = 0; k < a.dim(); ++k) ip = ip + a.entries[k].conj() * b.entries[k];
  const Rat na = a.norm2(), nb = b.norm2();
  if (na == 0 || nb == 0) throw invalid_input("exact_squared_overlap: zero vector");
  return ip.norm2() / (na * nb);
}

PureState::PureState(CVec v) : v_(std::move(v)) {
  if (v_.size() < 1) throw invalid_input("PureState: empty vector");
  if (std::abs(v_.norm() - 1.0) > kUnitNormTol)
    throw invalid_input("PureState: vector is not normalized");
}

PureState PureState::normalized(const CVec& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw invalid_input("PureState: cannot normalize the zero vector");
  return PureState(CVec(v / n));
}

Observation Observation::rank_one(const CVec& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw invalid_input("projector_from_vector: zero vector");
  Observation o;
  o.kind_ = Kind::rank_one;
  o.v_ = v / n;
  return o;
}

Observation Observation::general(const CMat& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw invalid_input("Observation: matrix is not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw invalid_input("Observation: matrix is not Hermitian");
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kHermitianTol)
    throw invalid_input("Observation: matrix is not positive semidefinite");
  Observation o;
  o.kind_ = Kind::general;
  o.m_ = std::move(h);
  return o;
}

int Observation::dim() const {
  return kind_ == Kind::rank_one ? static_cast<int>(v_.size())
                                 : static_cast<int>(m_.rows());
}

const CVec& Observation::vector() const {
  if (kind_ != Kind::rank_one) throw invalid_input("Observation: not rank-one");
  return v_;
}

CMat Observation::matrix() const {
  if (kind_ == Kind::general) return m_;
  return v_ * v_.adjoint();
}

double Observation::trace() const {
  if (kind_ == Kind::rank_one) return 1.0;
  return m_.trace().real();
}

double Observation::expectation(const PureState& psi) const {
  if (psi.dim() != dim()) throw invalid_input("Observation: dimension mismatch");
  if (kind_ == Kind::rank_one) {
    const Complex ip = v_.dot(psi.vector());
    return std::norm(ip);
  }
  return (psi.vector().adjoint() * m_ * psi.vector())(0).real();
}

Observation projector_from_vector(const CVec& v) { return Observation::rank_one(v); }

ObservationSet::ObservationSet(int d) : d_(d) {
  if (d < 1) throw invalid_input("ObservationSet: dimension must be at least 1");
}

void ObservationSet::add(Observation obs, long long multiplicity) {
  if (obs.dim() != d_) throw invalid_input("ObservationSet: dimension mismatch");
  if (multiplicity < 1) throw invalid_input("ObservationSet: multiplicity must be positive");
  items_.push_back({std::move(obs), multiplicity});
}

long long ObservationSet::total_multiplicity() const {
  long long n = 0;
  for (const auto& it : items_) n += it.multiplicity;
  return n;
}

bool ObservationSet::all_rank_one() const {
  for (const auto& it : items_)
    if (it.obs.kind() != Observation::Kind::rank_one) return false;
  return true;
}

bool ObservationSet::all_exact() const {
  for (const auto& it : items_)
    if (!it.obs.exact) return false;
  return true;
}

double log_likelihood(const PureState& psi, const ObservationSet& obs) {
  if (psi.dim() != obs.dim()) throw invalid_input("log_likelihood: dimension mismatch");
  double acc = 0.0;
  for (const auto& it : obs.items()) {
    const double e = it.obs.expectation(psi);
    if (!(e > 0.0)) return -std::numeric_limits<double>::infinity();
    acc += static_cast<double>(it.multiplicity) * std::log(e);
  }
  return acc;
}

std::optional<FactoredRational> exact_likelihood(const ExactVector& psi,
                                                 const ObservationSet& obs) {
  if (psi.dim() != obs.dim()) throw invalid_input("exact_likelihood: dimension mismatch");
  if (!obs.all_exact()) return std::nullopt;
  FactoredRational acc = FactoredRational::one();
  for (const auto& it : obs.items()) {
    const Rat r = exact_squared_overlap(*it.obs.exact, psi);
    if (r == 0) return FactoredRational::zero();
    auto f = FactoredRational::from_rat(r);
    f.pow(BigInt(it.multiplicity));
    acc.mul(f);
  }
  return acc;
}

std::optional<double> exact_log_likelihood(const ExactVector& psi,
                                           const ObservationSet& obs) {
  if (psi.dim() != obs.dim()) throw invalid_input("exact_log_likelihood: dimension mismatch");
  if (!obs.all_exact()) return std::nullopt;
  double acc = 0.0;
  for (const auto& it : obs.items()) {
    const Rat r = exact_squared_overlap(*it.obs.exact, psi);
    if (r == 0) return -std::numeric_limits<double>::infinity();
    acc += static_cast<double>(it.multiplicity) * log_rat(r);
  }
  return acc;
}

SignVector SignVector::from_index(int d, std::uint64_t index) {
  if (d < 1) throw invalid_input("SignVector: dimension must be at least 1");
  if (d < 64 && index >= (1ull << (d - 1)))
    throw invalid_input("SignVector: index out of range");
  SignVector s;
  s.signs.resize(d);
  s.signs[0] = 1;
  for (int k = 1; k < d; ++k) {
    const int bit = static_cast<int>((index >> (d - 1 - k)) & 1ull);
    s.signs[k] = bit ? -1 : 1;
  }
  return s;
}

std::uint64_t SignVector::index() const {
  std::uint64_t idx = 0;
  const int d = dim();
  for (int k = 1; k < d; ++k) {
    idx = (idx << 1) | (signs[k] == -1 ? 1ull : 0ull);
  }
  return idx;
}

PureState b0_state(const SignVector& s) {
  const int d = s.dim();
  if (d < 1) throw invalid_input("b0_state: empty sign vector");
  if (s.signs[0] != 1) throw invalid_input("b0_state: first sign must be +1");
  CVec v(d);
  ExactVector ev;
  ev.entries.resize(d);
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    if (s.signs[k] != 1 && s.signs[k] != -1)
      throw invalid_input("b0_state: signs must be +1 or -1");
    v(k) = Complex(s.signs[k] * inv, 0.0);
    ev.entries[k] = GaussRat{Rat(s.signs[k]), Rat(0)};
  }
  PureState psi{std::move(v)};
  psi.exact = std::move(ev);
  return psi;
}

ObservationSet basic_observation_set(int d) {
  if (d < 2) throw invalid_input("basic_observation_set: need dimension at least 2");
  ObservationSet set(d);
  for (int k = 0; k < d; ++k) {
    CVec v = CVec::Zero(d);
    v(k) = 1.0;
    Observation o = Observation::rank_one(v);
    ExactVector ev;
    ev.entries.assign(d, GaussRat{});
    ev.entries[k] = GaussRat{Rat(1), Rat(0)};
    o.exact = std::move(ev);
    set.add(std::move(o));
  }
  const double inv = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      for (int sign : {+1, -1}) {
        CVec v = CVec::Zero(d);
        v(j) = Complex(inv, 0.0);
        v(k) = Complex(0.0, sign * inv);
        Observation o = Observation::rank_one(v);
        ExactVector ev;
        ev.entries.assign(d, GaussRat{});
        ev.entries[j] = GaussRat{Rat(1), Rat(0)};
        ev.entries[k] = GaussRat{Rat(0), Rat(sign)};
        o.exact = std::move(ev);
        set.add(std::move(o));
      }
    }
  }
  return set;
}

StateCoords state_coords(const PureState& psi) {
  const int d = psi.dim();
  StateCoords c;
  c.alpha.resize(d);
  c.theta.resize(d);
  c.n.resize(d);
  int gauge = -1;
  for (int k = 0; k < d; ++k) {
    if (std::abs(psi.vector()(k)) > 1e-15) {
      gauge = k;
      break;
    }
  }
  if (gauge < 0) throw invalid_input("state_coords: zero state");
  c.gauge_index = gauge;
  const Complex phase = std::polar(1.0, -std::arg(psi.vector()(gauge)));
  for (int k = 0; k < d; ++k) {
    const Complex z = psi.vector()(k) * phase;
    c.alpha[k] = d * std::norm(z);
    double t = (std::abs(z) > 1e-15) ? std::arg(z) / kPi : 0.0;  // in (-1, 1]
    if (t >= 0.5) {
      c.theta[k] = t - 1.0;
      c.n[k] = 1;
    } else if (t < -0.5) {
      c.theta[k] = t + 1.0;
      c.n[k] = 1;
    } else {
      c.theta[k] = t;
      c.n[k] = 0;
    }
  }
  return c;
}

PureState state_from_coords(const StateCoords& c) {
  const int d = static_cast<int>(c.alpha.size());
  if (d < 1 || c.theta.size() != c.alpha.size() || c.n.size() != c.alpha.size())
    throw invalid_input("state_from_coords: inconsistent coordinate lengths");
  double sum = 0.0;
  for (int k = 0; k < d; ++k) {
    if (c.alpha[k] < -1e-12) throw invalid_input("state_from_coords: negative amplitude");
    sum += c.alpha[k];
  }
  if (std::abs(sum - d) > 1e-8)
    throw invalid_input("state_from_coords: amplitudes must sum to the dimension");
  CVec v(d);
  for (int k = 0; k < d; ++k) {
    const double r = std::sqrt(std::max(0.0, c.alpha[k]) / d);
    v(k) = std::polar(r, kPi * (c.theta[k] + c.n[k]));
  }
  return PureState::normalized(v);
}

B0Distance dist_to_b0(const PureState& psi) {
  const int d = psi.dim();
  const std::uint64_t count = 1ull << (d - 1);
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  double best_overlap = -1.0;
  std::uint64_t best_index = 0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Complex ip(0.0, 0.0);
    for (int k = 0; k < d; ++k) {
      const int sign = (k == 0) ? 1 : (((idx >> (d - 1 - k)) & 1ull) ? -1 : 1);
      ip += static_cast<double>(sign) * psi.vector()(k);
    }
    const double overlap = std::abs(ip) * inv;
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best_index = idx;
    }
  }
  B0Distance out;
  out.sign = SignVector::from_index(d, best_index);
  out.distance = std::sqrt(std::max(0.0, 2.0 - 2.0 * best_overlap));
  return out;
}

PureState random_pure_state(int d, SplitMix64& rng) {
  if (d < 1) throw invalid_input("random_pure_state: dimension must be at least 1");
  CVec v(d);
  double n2 = 0.0;
  do {
    for (int k = 0; k < d; ++k) {
      v(k) = Complex(rng.normal(), rng.normal());
    }
    n2 = v.squaredNorm();
  } while (!(n2 > 1e-24));
  return PureState(CVec(v / std::sqrt(n2)));
}

}  // namespace qbu
