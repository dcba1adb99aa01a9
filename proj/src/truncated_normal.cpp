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

#include "dtn/truncated_normal.hpp"

#include <cmath>
#include <limits>

#include "dtn/errors.hpp"
#include "dtn/special_functions.hpp"

namespace dtn {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// 2 Phi(rho) - 1, the Normal mass kept by the symmetric window, computed as
// erf(rho/sqrt(2)). The direct erf form has full relative accuracy at both
// extremes, where the subtraction 2*Phi(rho) - 1 (small rho) or
// 1 - 2*Phi(-rho) (large rho) would cancel.
double kept_mass(double rho) { return erf(rho * kInvSqrt2); }

// phi(z) / Phi-mass helpers tolerating infinite standardized bounds.
double phi_at(double z) {
  if (std::isinf(z)) return 0.0;
  return std_normal_pdf(z);
}

double cdf_at(double z) {
  if (std::isinf(z)) return z > 0.0 ? 1.0 : 0.0;
  return std_normal_cdf(z);
}

// z * phi(z) with the z -> +/-inf limit resolved to 0.
double z_phi_at(double z) {
  if (std::isinf(z)) return 0.0;
  return z * std_normal_pdf(z);
}

}  // namespace

void TnParams::validate() const {
  if (!(eta > 0.0)) throw DomainError("TnParams: eta must be positive");
  if (std::isnan(mu) || std::isinf(mu)) {
    throw DomainError("TnParams: mu must be finite");
  }
  if (!(a < b)) throw DomainError("TnParams: requires a < b");
  const double za = std::isinf(a) ? a : (a - mu) / eta;
  const double zb = std::isinf(b) ? b : (b - mu) / eta;
  if (!(cdf_at(zb) - cdf_at(za) > 1e-300)) {
    throw DomainError("TnParams: truncation window has no Normal mass");
  }
}

void DtnParams::validate() const {
  if (!(eta > 0.0)) throw DomainError("DtnParams: eta must be positive");
  if (!(rho > 0.0)) throw DomainError("DtnParams: rho must be positive");
  if (std::isnan(mu) || std::isinf(mu)) {
    throw DomainError("DtnParams: mu must be finite");
  }
  if (!(kept_mass(rho) > 1e-300)) {
    throw DomainError("DtnParams: truncation window has no Normal mass");
  }
}

double tn_pdf(double x, const TnParams& p) {
  p.validate();
  if (x < p.a || x > p.b) return 0.0;
  const double za = std::isinf(p.a) ? p.a : (p.a - p.mu) / p.eta;
  const double zb = std::isinf(p.b) ? p.b : (p.b - p.mu) / p.eta;
  const double xi = (x - p.mu) / p.eta;
  return std_normal_pdf(xi) / (p.eta * (cdf_at(zb) - cdf_at(za)));
}

double tn_mean(const TnParams& p) {
  p.validate();
  const double za = std::isinf(p.a) ? p.a : (p.a - p.mu) / p.eta;
  const double zb = std::isinf(p.b) ? p.b : (p.b - p.mu) / p.eta;
  const double mass = cdf_at(zb) - cdf_at(za);
  return p.mu + p.eta * (phi_at(za) - phi_at(zb)) / mass;
}

double tn_var(const TnParams& p) {
  p.validate();
  const double za = std::isinf(p.a) ? p.a : (p.a - p.mu) / p.eta;
  const double zb = std::isinf(p.b) ? p.b : (p.b - p.mu) / p.eta;
  const double mass = cdf_at(zb) - cdf_at(za);
  const double shift = (phi_at(za) - phi_at(zb)) / mass;
  const double second = (z_phi_at(za) - z_phi_at(zb)) / mass;
  return p.eta * p.eta * (1.0 + second - shift * shift);
}

double dtn_pdf(double x, const DtnParams& p) {
  p.validate();
  if (x < p.lower() || x > p.upper()) return 0.0;
  const double xi = (x - p.mu) / p.eta;
  return std_normal_pdf(xi) / (p.eta * kept_mass(p.rho));
}

double dtn_cdf(double x, const DtnParams& p) {
  p.validate();
  if (x <= p.lower()) return 0.0;
  if (x >= p.upper()) return 1.0;
  const double xi = (x - p.mu) / p.eta;
  const double m = kept_mass(p.rho);
  // (Phi(xi) - Phi(-rho)) / m written through erf so that nothing cancels
  // when rho is small and both CDF values sit next to one half.
  return (erf(xi * kInvSqrt2) + m) / (2.0 * m);
}

double dtn_quantile(double q, const DtnParams& p) {
  p.validate();
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("dtn_quantile: q must lie in [0, 1]");
  }
  if (q == 0.0) return p.lower();
  if (q == 1.0) return p.upper();
  const double m = kept_mass(p.rho);
  // Phi(-rho) + q * m can round up to 1.0 when q sits a few ulp below 1;
  // cap it at the largest double below 1 (the output is clamped to the
  // support anyway).
  const double inner =
      std::min(0.5 * erfc(p.rho * kInvSqrt2) + q * m, 1.0 - 0x1.0p-53);
  const double x = p.mu + p.eta * inv_std_normal_cdf(inner);
  return std::min(std::max(x, p.lower()), p.upper());
}

double dtn_mean(const DtnParams& p) {
  p.validate();
  return p.mu;
}

double variance_factor(double rho) {
  if (!(rho > 0.0)) throw DomainError("variance_factor: rho must be positive");
  if (rho < 1e-4) {
    const double r2 = rho * rho;
    return r2 / 3.0 * (1.0 - 2.0 * r2 / 15.0);
  }
  return 1.0 - 2.0 * rho * std_normal_pdf(rho) / kept_mass(rho);
}

double dtn_var(const DtnParams& p) {
  p.validate();
  return p.eta * p.eta * variance_factor(p.rho);
}

double dtn_sample(const DtnParams& p, Rng& stream) {
  return dtn_quantile(stream.uniform01(), p);
}

DtnParams affine(const DtnParams& p, double k0, double k1) {
  p.validate();
  if (p.mu != 0.0) {
    throw DomainError("affine: requires a centered distribution (mu == 0)");
  }
  if (k1 == 0.0) {
    throw DomainError("affine: k1 == 0 collapses the distribution");
  }
  if (std::isnan(k0) || std::isinf(k0) || std::isnan(k1) || std::isinf(k1)) {
    throw DomainError("affine: coefficients must be finite");
  }
  return DtnParams{k0, std::fabs(k1) * p.eta, p.rho};
}

DtnParams center(const DtnParams& p) {
  p.validate();
  return DtnParams{0.0, p.eta, p.rho};
}

}  // namespace dtn
