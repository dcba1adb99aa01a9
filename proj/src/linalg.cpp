// Copyright 2026 the dtn authors
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

#include "dtn/linalg.hpp"

#include <cmath>
#include <string>

#include "dtn/errors.hpp"

namespace dtn {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double LowerTriangular::log_det_spd() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < n_; ++i) acc += std::log(at(i, i));
  return 2.0 * acc;
}

void LowerTriangular::forward_solve(std::vector<double>& b) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= at(i, j) * b[j];
    b[i] = s / at(i, i);
  }
}

void LowerTriangular::backward_solve(std::vector<double>& b) const {
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n_; ++j) s -= at(j, ii) * b[j];
    b[ii] = s / at(ii, ii);
  }
}

LowerTriangular cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) {
    throw DomainError("cholesky: matrix must be square and nonempty");
  }
  // Symmetry within 1e-10 relative is the caller's contract; verify it.
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::fabs(a(i, j)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(a(i, j) - a(j, i)) > 1e-10 * std::max(scale, 1.0)) {
        throw DomainError("cholesky: matrix is not symmetric");
      }
    }
  }

  LowerTriangular l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0)) {
      throw NotPositiveDefiniteError(
          "cholesky: non-positive pivot at index " + std::to_string(j), j);
    }
    const double root = std::sqrt(d);
    l.at(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = s / root;
    }
  }
  return l;
}

double gaussian_loglik_term(std::span<const double> residual,
                            const Matrix& covariance) {
  const std::size_t n = residual.size();
  if (covariance.rows() != n || covariance.cols() != n) {
    throw DomainError("gaussian_loglik_term: dimension mismatch");
  }
  const LowerTriangular l = cholesky(covariance);
  std::vector<double> w(residual.begin(), residual.end());
  l.forward_solve(w);
  double quad = 0.0;
  for (double v : w) quad += v * v;
  return -0.5 * (static_cast<double>(n) * kLog2Pi + l.log_det_spd() + quad);
}

}  // namespace dtn
