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

#include "dtn/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtn/errors.hpp"
#include "dtn/special_functions.hpp"

namespace dtn {

double ks_statistic_vs_std_normal(std::span<const double> samples) {
  if (samples.empty()) {
    throw DomainError("ks_statistic_vs_std_normal: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = std_normal_cdf(sorted[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    sup = std::max({sup, std::fabs(hi), std::fabs(lo)});
  }
  return sup;
}

}  // namespace dtn
