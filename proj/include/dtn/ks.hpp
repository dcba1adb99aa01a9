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

#ifndef DTN_KS_HPP_
#define DTN_KS_HPP_

#include <span>

namespace dtn {

/// One-sample Kolmogorov-Smirnov statistic against the standard Normal:
/// sup_x |F_n(x) - Phi(x)| over the sorted sample, checking the empirical
/// CDF from both sides of each jump. Throws DomainError on empty input.
double ks_statistic_vs_std_normal(std::span<const double> samples);

}  // namespace dtn

#endif  // DTN_KS_HPP_
