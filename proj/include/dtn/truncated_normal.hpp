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

#ifndef DTN_TRUNCATED_NORMAL_HPP_
#define DTN_TRUNCATED_NORMAL_HPP_

#include "dtn/rng.hpp"

namespace dtn {

/// General truncated Normal TN(mu, eta^2, [a, b]). Infinite bounds are
/// legal, so the plain Normal is the degenerate case a = -inf, b = +inf.
struct TnParams {
  double mu;
  double eta;
  double a;
  double b;

  /// Throws DomainError unless eta > 0, a < b, and the truncation window
  /// keeps nonzero Normal mass.
  void validate() const;
};

/// Symmetric doubly truncated Normal DTN(mu, eta^2, rho): the TN with
/// bounds mu +/- rho*eta.
struct DtnParams {
  double mu;
  double eta;
  double rho;

  void validate() const;

  double lower() const { return mu - rho * eta; }
  double upper() const { return mu + rho * eta; }

  /// The equivalent 4-parameter representation.
  TnParams as_tn() const { return TnParams{mu, eta, lower(), upper()}; }
};

// --- general TN (Olive's moment formulas) ---

double tn_pdf(double x, const TnParams& p);
double tn_mean(const TnParams& p);
double tn_var(const TnParams& p);

// --- symmetric DTN ---

/// Density: phi(xi) / (eta * (2 Phi(rho) - 1)) inside the support, exactly
/// zero outside.
double dtn_pdf(double x, const DtnParams& p);

/// CDF of the DTN; 0 below the support, 1 above.
double dtn_cdf(double x, const DtnParams& p);

/// Quantile for q in [0, 1] (endpoints map to the support bounds). The
/// result is clamped to the support to absorb last-ulp overshoot of the
/// Normal quantile.
double dtn_quantile(double q, const DtnParams& p);

/// The mean is mu, exactly.
double dtn_mean(const DtnParams& p);

/// The variance-shrinkage map rho -> 1 - 2 rho phi(rho) / (2 Phi(rho) - 1).
/// Strictly increasing on (0, inf) with range (0, 1); below rho = 1e-4 a
/// series expansion (rho^2/3 * (1 - 2 rho^2/15)) replaces the direct form,
/// which loses more than six digits to cancellation there.
double variance_factor(double rho);

/// eta^2 * variance_factor(rho); never exceeds eta^2.
double dtn_var(const DtnParams& p);

/// Exact inverse-transform draw: one uniform from `stream` through
/// dtn_quantile. Always lands inside the support.
double dtn_sample(const DtnParams& p, Rng& stream);

/// Law of k0 + k1 * x for centered x ~ DTN(0, eta^2, rho):
/// DTN(k0, k1^2 eta^2, rho). Requires p.mu == 0 (center first) and k1 != 0.
DtnParams affine(const DtnParams& p, double k0, double k1);

/// Law of x - mu: DTN(0, eta^2, rho).
DtnParams center(const DtnParams& p);

}  // namespace dtn

#endif  // DTN_TRUNCATED_NORMAL_HPP_
