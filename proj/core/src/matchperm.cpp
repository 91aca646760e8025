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

#include "qbu/matchperm.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace qbu {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Ones on the 2x2 diagonal blocks, zero elsewhere.
template <typename T>
Dense<T> block_identity(int size) {
  Dense<T> m(size, size, T(0));
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (i / 2 == j / 2) m(i, j) = T(1);
  return m;
}
}  // namespace

Dense<double> rat_to_double_matrix(const RatMatrix& m) {
  Dense<double> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = rat_to_double(m(i, j));
  return out;
}

DoubledMatrix::DoubledMatrix(Dense<double> m, double tol) : m_(std::move(m)) {
  const int size = m_.rows();
  if (size != m_.cols() || size % 2 != 0)
    throw invalid_input("DoubledMatrix: need an even square matrix");
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > tol)
        throw invalid_input("DoubledMatrix: matrix is not symmetric");
      if (i % 2 == 0 && std::abs(m_(i, j) - m_(i + 1, j)) > tol)
        throw invalid_input("DoubledMatrix: adjacent rows differ");
    }
  unit_diagonal_ = true;
  for (int i = 0; i < size; ++i)
    if (std::abs(m_(i, i) - 1.0) > tol) {
      unit_diagonal_ = false;
      break;
    }
}

void validate_doubled_rational(const RatMatrix& m) {
  const int size = m.rows();
  if (size != m.cols() || size % 2 != 0)
    throw invalid_input("validate_doubled_rational: need an even square matrix");
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      if (!(m(i, j) == m(j, i)))
        throw invalid_input("validate_doubled_rational: matrix is not symmetric");
      if (i % 2 == 0 && !(m(i, j) == m(i + 1, j)))
        throw invalid_input("validate_doubled_rational: adjacent rows differ");
    }
}

DoubledMatrix gram_from_observations(const ObservationSet& obs) {
  if (obs.dim() < 1) throw invalid_input("gram_from_observations: empty observation set");
  if (!obs.all_rank_one())
    throw invalid_input("gram_from_observations: all observations must be rank-one");
  const int d = obs.dim();
  std::vector<Eigen::VectorXd> r;
  for (const auto& it : obs.items()) {
    Eigen::VectorXd v(2 * d);
    for (int k = 0; k < d; ++k) {
      v(k) = it.obs.vector()(k).real();
      v(d + k) = -it.obs.vector()(k).imag();
    }
    for (long long c = 0; c < it.multiplicity; ++c) r.push_back(v);
  }
  const int n = static_cast<int>(r.size());
  Dense<double> g(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) g(i, j) = r[i / 2].dot(r[j / 2]);
  return DoubledMatrix(std::move(g));
}

double WickConstant::value() const {
  return rat_to_double(coeff) * std::pow(kPi, static_cast<double>(d));
}

double WickConstant::printed_value() const {
  return rat_to_double(printed_coeff) * std::pow(kPi, static_cast<double>(d));
}

WickConstant wick_constant(int d, int n) {
  if (d < 1 || n < 0) throw invalid_input("wick_constant: need d >= 1 and n >= 0");
  WickConstant w;
  w.d = d;
  w.n = n;
  const Rat fact(factorial(static_cast<unsigned>(d + n - 1)));
  const Rat two_n(ipow(BigInt(2), static_cast<unsigned long>(n)));
  w.coeff = Rat(2) / (two_n * fact);
  w.printed_coeff = Rat(2) * two_n / fact;
  return w;
}

double pnorm_via_pairings(const ObservationSet& obs) {
  const DoubledMatrix g = gram_from_observations(obs);
  const int n = g.size() / 2;
  const WickConstant w = wick_constant(obs.dim(), n);
  return w.value() * pairing_sum(g.matrix());
}

namespace {
// Leading coefficient of the interpolating polynomial through (x_j, y_j):
// sum_j y_j / prod_{k != j} (x_j - x_k).  The weights grow like
// (degree+1)^degree / (scale^degree degree!), so node values are carried in
// extended precision to keep the amplified rounding below 1e-6 relative at
// degree 8.
long double leading_coefficient(const std::vector<long double>& x,
                                const std::vector<long double>& y, long double scale) {
  const std::size_t n = x.size();
  long double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    long double denom = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const long double diff = x[j] - x[k];
      if (std::abs(static_cast<double>(diff)) < 1e-12 * static_cast<double>(scale))
        throw conditioning_error("extract_base_permanent: interpolation nodes nearly coincide");
      denom *= diff;
    }
    acc += y[j] / denom;
  }
  return acc;
}
}  // namespace

double extract_base_permanent(const DoubledMatrix& a, const ExtractOptions& opts) {
  const int size = a.size();
  const Dense<long double> i2 = block_identity<long double>(size);
  Dense<long double> b(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      b(i, j) = static_cast<long double>(a.matrix()(i, j)) - i2(i, j);
  Dense<double> bd(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) bd(i, j) = static_cast<double>(b(i, j));
  const double lambda_min = min_eigenvalue_sym(bd);
  const long double alpha_max = lambda_min < 0.0 ? 1.0 / std::abs(lambda_min) : 1.0;
  const int degree = opts.target == ExtractTarget::permanent ? size : size / 2;

  std::vector<long double> x(degree + 1), y(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    if (opts.chebyshev_nodes) {
      const long double c =
          std::cos(static_cast<long double>(2.0 * j + 1.0) * kPi / (2.0 * (degree + 1)));
      x[j] = 0.5L * alpha_max * (1.0L + c);
    } else {
      x[j] = alpha_max * static_cast<long double>(j + 1) / static_cast<long double>(degree + 1);
    }
  }
  Dense<long double> ap(size, size);
  for (int j = 0; j <= degree; ++j) {
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) ap(r, c) = i2(r, c) + x[j] * b(r, c);
    y[j] = opts.target == ExtractTarget::permanent ? permanent(ap) : pairing_sum(ap);
  }
  return static_cast<double>(leading_coefficient(x, y, alpha_max));
}

Rat extract_base_rational(const RatMatrix& a, const Rat& alpha_max, ExtractTarget target) {
  const int size = a.rows();
  if (size != a.cols()) throw invalid_input("extract_base_rational: need square matrix");
  if (size % 2 != 0) throw invalid_input("extract_base_rational: need even size");
  if (!(alpha_max > 0)) throw invalid_input("extract_base_rational: alpha_max must be positive");
  const RatMatrix i2 = block_identity<Rat>(size);
  RatMatrix b(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) b(i, j) = a(i, j) - i2(i, j);
  const int degree = target == ExtractTarget::permanent ? size : size / 2;

  std::vector<Rat> x(degree + 1), y(degree + 1);
  RatMatrix ap(size, size);
  for (int j = 0; j <= degree; ++j) {
    x[j] = alpha_max * Rat(j + 1) / Rat(degree + 1);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) ap(r, c) = i2(r, c) + x[j] * b(r, c);
    y[j] = target == ExtractTarget::permanent ? permanent(ap) : pairing_sum(ap);
  }
  Rat acc = 0;
  for (int j = 0; j <= degree; ++j) {
    Rat denom = 1;
    for (int k = 0; k <= degree; ++k) {
      if (k == j) continue;
      denom *= x[j] - x[k];
    }
    acc += y[j] / denom;
  }
  return acc;
}

double min_eigenvalue_sym(const Dense<double>& m) {
  if (m.rows() != m.cols()) throw invalid_input("min_eigenvalue_sym: need square matrix");
  if (m.rows() == 0) return 0.0;
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace qbu
