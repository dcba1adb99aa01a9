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

#ifndef DTN_LINALG_HPP_
#define DTN_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace dtn {

/// Dense row-major matrix. Deliberately minimal: the model code works with
/// per-group covariance blocks of a few dozen rows, nothing BLAS-grade.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Cholesky factor of an SPD matrix; rows stored packed, diagonal positive.
class LowerTriangular {
 public:
  explicit LowerTriangular(std::size_t n)
      : n_(n), entries_(n * (n + 1) / 2, 0.0) {}

  std::size_t dim() const { return n_; }

  double& at(std::size_t i, std::size_t j) {
    return entries_[i * (i + 1) / 2 + j];
  }
  double at(std::size_t i, std::size_t j) const {
    return entries_[i * (i + 1) / 2 + j];
  }

  /// log det(L L^T) = 2 * sum(log diag).
  double log_det_spd() const;

  /// Solve L x = b in place.
  void forward_solve(std::vector<double>& b) const;

  /// Solve L^T x = b in place.
  void backward_solve(std::vector<double>& b) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Classic unpivoted Cholesky. Throws NotPositiveDefiniteError (with the
/// failing pivot index) on a non-positive pivot, and DomainError if the
/// input is not square/symmetric; no jitter is ever added on behalf of the
/// caller.
LowerTriangular cholesky(const Matrix& a);

/// Log density of N(0, covariance) at `residual`, computed through the
/// Cholesky factor: -(n log 2pi + log det + r^T cov^-1 r)/2.
double gaussian_loglik_term(std::span<const double> residual,
                            const Matrix& covariance);

}  // namespace dtn

#endif  // DTN_LINALG_HPP_
