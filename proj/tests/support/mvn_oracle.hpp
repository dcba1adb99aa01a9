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

// Brute-force multivariate Normal log density for small dimensions, via
// cofactor determinants and the adjugate inverse. Deliberately naive and
// independent of the library's Cholesky path; the mixed-model likelihood
// is verified against this.

#ifndef DTN_TESTS_SUPPORT_MVN_ORACLE_HPP_
#define DTN_TESTS_SUPPORT_MVN_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

namespace dtn_test {

using Dense = std::vector<std::vector<double>>;

inline double determinant(const Dense& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Dense minor(n - 1, std::vector<double>(n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][jj++] = a[i][j];
      }
    }
    acc += (c % 2 == 0 ? 1.0 : -1.0) * a[0][c] * determinant(minor);
  }
  return acc;
}

inline Dense adjugate_inverse(const Dense& a) {
  const std::size_t n = a.size();
  const double det = determinant(a);
  Dense inv(n, std::vector<double>(n));
  if (n == 1) {
    inv[0][0] = 1.0 / a[0][0];
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Dense minor(n - 1, std::vector<double>(n - 1));
      std::size_t ii = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if (p == i) continue;
        std::size_t jj = 0;
        for (std::size_t q = 0; q < n; ++q) {
          if (q == j) continue;
          minor[ii][jj++] = a[p][q];
        }
        ++ii;
      }
      inv[j][i] = ((i + j) % 2 == 0 ? 1.0 : -1.0) * determinant(minor) / det;
    }
  }
  return inv;
}

inline double mvn_loglik_bruteforce(const std::vector<double>& r,
                                    const Dense& cov) {
  const std::size_t n = r.size();
  const Dense inv = adjugate_inverse(cov);
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) quad += r[i] * inv[i][j] * r[j];
  }
  return -0.5 * (static_cast<double>(n) * std::log(2.0 * M_PI) +
                 std::log(determinant(cov)) + quad);
}

}  // namespace dtn_test

#endif  // DTN_TESTS_SUPPORT_MVN_ORACLE_HPP_
