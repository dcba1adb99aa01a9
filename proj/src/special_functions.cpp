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

#include "dtn/special_functions.hpp"

#include <cmath>
#include <limits>

#include "dtn/errors.hpp"

namespace dtn {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Coefficients from Cody's SPECFUN CALERF (netlib), double-precision set.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156,
                          377.485237685302021, 3209.37758913846947,
                          0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173,
                          1282.61652607737228, 2844.23683343917062};
constexpr double kC[9] = {
    0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
    298.635138197400131,  881.95222124176909,  1712.04761263407058,
    2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499,
                          537.181101862009858, 1621.38957456669019,
                          3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439,
                          0.125781726111229246, 0.0160837851487422766,
                          6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047,
                          0.527905102951428412, 0.0605183413124413191,
                          0.00233520497626869185};

constexpr double kThresh = 0.46875;
constexpr double kXBig = 26.543;      // erfc underflows beyond this
constexpr double kXSmall = 1.11e-16;  // below this erf(x) = 2x/sqrt(pi)
constexpr double kSqrPi = 0.56418958354775628695;  // 1/sqrt(pi)

// |x| <= 0.46875: erf(x) = x * R(x^2).
double erf_small(double x) {
  const double y = std::fabs(x);
  double ysq = 0.0;
  if (y > kXSmall) ysq = y * y;
  double xnum = kA[4] * ysq;
  double xden = ysq;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kA[i]) * ysq;
    xden = (xden + kB[i]) * ysq;
  }
  return x * (xnum + kA[3]) / (xden + kB[3]);
}

// 0.46875 < y <= 4: erfc(y) = exp(-y^2) * R(y), with the exp argument split
// so the rounding of y*y does not leak into the result.
double erfc_mid(double y) {
  double xnum = kC[8] * y;
  double xden = y;
  for (int i = 0; i < 7; ++i) {
    xnum = (xnum + kC[i]) * y;
    xden = (xden + kD[i]) * y;
  }
  double result = (xnum + kC[7]) / (xden + kD[7]);
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

// y > 4: erfc(y) = exp(-y^2)/y * (1/sqrt(pi) - R(1/y^2)/y^2).
double erfc_large(double y) {
  if (y >= kXBig) return 0.0;
  const double z = 1.0 / (y * y);
  double xnum = kP[5] * z;
  double xden = z;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kP[i]) * z;
    xden = (xden + kQ[i]) * z;
  }
  double result = z * (xnum + kP[4]) / (xden + kQ[4]);
  result = (kSqrPi - result) / y;
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

}  // namespace

double erf(double x) {
  const double y = std::fabs(x);
  if (y <= kThresh) return erf_small(x);
  const double c = y <= 4.0 ? erfc_mid(y) : erfc_large(y);
  const double r = 1.0 - c;
  return x < 0.0 ? -r : r;
}

double erfc(double x) {
  const double y = std::fabs(x);
  double c;
  if (y <= kThresh) {
    c = 1.0 - erf_small(y);
  } else if (y <= 4.0) {
    c = erfc_mid(y);
  } else {
    c = erfc_large(y);
  }
  return x < 0.0 ? 2.0 - c : c;
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * erfc(-x * kInvSqrt2); }

double inv_std_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("inv_std_normal_cdf: p must lie strictly in (0, 1)");
  }

  // Acklam's rational approximation (relative error < 1.15e-9).
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the accurate CDF pushes the error to a few ulp.
  const double e = std_normal_cdf(x) - p;
  const double pdf = std_normal_pdf(x);
  if (pdf > 0.0) {
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace dtn
