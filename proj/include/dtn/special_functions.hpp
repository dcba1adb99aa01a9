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

#ifndef DTN_SPECIAL_FUNCTIONS_HPP_
#define DTN_SPECIAL_FUNCTIONS_HPP_

namespace dtn {

/// Error function, split-range rational approximations after W. J. Cody,
/// "Rational Chebyshev approximation for the error function" (1969).
/// Absolute error below 1e-15 over the real line.
double erf(double x);

/// Complementary error function from the same approximation set; keeps full
/// relative accuracy in the far tail where 1 - erf(x) would cancel.
double erfc(double x);

/// Standard Normal density.
double std_normal_pdf(double x);

/// Standard Normal CDF, evaluated as erfc(-x/sqrt(2))/2 so both tails carry
/// full relative accuracy.
double std_normal_cdf(double x);

/// Standard Normal quantile: Acklam's rational initializer refined with one
/// Halley step. Throws DomainError unless 0 < p < 1.
double inv_std_normal_cdf(double p);

}  // namespace dtn

#endif  // DTN_SPECIAL_FUNCTIONS_HPP_
