# Copyright 2026 the dtn authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the constants in reference_values.hpp with mpmath.

Run `python3 reference_oracle.py` and paste the printed values. Keeping the
oracle in a different language and arithmetic (40-digit decimal) makes the
frozen values independent of the C++ implementation they verify.
"""

from mpmath import erf, findroot, log, mp, mpf, pi, sqrt, exp

mp.dps = 40


def phi(x):
    return exp(-x * x / 2) / sqrt(2 * pi)


def cdf(x):
    return (1 + erf(x / sqrt(2))) / 2


def vf(r):
    return 1 - 2 * r * phi(r) / erf(r / sqrt(2))


def G(u):
    return cdf(u) - u * phi(u)


def emit(name, value):
    print(f"constexpr double {name} = {mp.nstr(value, 22)};")


emit("kErf1", erf(1))
emit("kErf1p2345", erf(mpf("1.2345")))
emit("kInvSqrt2Pi", phi(0))
emit("kPhi1", phi(1))
emit("kNormalCdf1", cdf(1))
emit("kNormalQuantileOf0841", findroot(lambda t: cdf(t) - mpf("0.8413447461"), 1))
emit("kMassRho1", erf(1 / sqrt(2)))
emit("kDtnPdf0Rho1", phi(0) / erf(1 / sqrt(2)))
emit("kDtnCdfHalfRho1", (cdf(mpf("0.5")) - cdf(-1)) / erf(1 / sqrt(2)))
emit("kVf1", vf(mpf(1)))
emit("kVf2", vf(mpf(2)))
emit("kVf2p5", vf(mpf("2.5")))
emit("kVf001OverSmallRhoLimit", vf(mpf("0.01")) / (mpf("0.01") ** 2 / 3))
emit("kHalfNormalMean", phi(0) / (1 - cdf(0)))
emit("kHalfNormalVar", 1 - 2 / pi)
emit("kLindebergDtn012Cut1", 2 / erf(2 / sqrt(2)) * (G(mpf(2)) - G(mpf(1))) / vf(mpf(2)))
emit("kGaussianLoglik2x2", -(2 * log(2 * pi) + log(3) + 2) / 2)
