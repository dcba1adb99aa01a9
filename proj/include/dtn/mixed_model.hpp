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

#ifndef DTN_MIXED_MODEL_HPP_
#define DTN_MIXED_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtn/linalg.hpp"
#include "dtn/nelder_mead.hpp"
#include "dtn/rng.hpp"

namespace dtn {

enum class Sign { nonnegative, nonpositive };

/// Ties a random-effect column to the fixed coefficient whose magnitude
/// bounds it: gamma ~ DTN(0, varsigma^2, [-|beta|, |beta|]), so the overall
/// per-group coefficient beta + gamma keeps the declared sign.
struct ColumnConstraint {
  std::size_t beta_index;
  Sign sign;
};

/// Grouped observations y = X beta + Z gamma_group + eps.
struct Dataset {
  std::vector<double> y;
  Matrix x;  // m x k fixed-effects design
  Matrix z;  // m x p random-effects design
  std::vector<std::int64_t> group_label;  // per row; equal label = same group

  std::size_t rows() const { return y.size(); }
  std::size_t n_fixed() const { return x.cols(); }
  std::size_t n_random() const { return z.cols(); }

  void validate() const;

  /// Row indices per group, groups ordered by first appearance.
  std::vector<std::vector<std::size_t>> group_rows() const;
};

struct ModelParams {
  std::vector<double> beta;
  double sigma2 = 1.0;
  std::vector<double> varsigma;  // one scale per random column
  std::vector<std::optional<ColumnConstraint>> constraints;  // per column

  void validate() const;
};

struct FitOptions {
  NelderMeadOptions optimizer;
  int restarts = 1;  // one re-run from the incumbent polishes convergence
  std::size_t max_free_params = 32;
  std::optional<ModelParams> init;  // overrides the OLS-based initializer
};

struct FitResult {
  ModelParams params;
  double loglik = 0.0;
  OptimizerReport report;
  /// Truncation half-widths |beta_i| / varsigma_i for constrained columns,
  /// NaN where unconstrained.
  std::vector<double> rho;
};

/// Diagonal of the random-effect covariance Lambda: for a constrained
/// column, varsigma^2 shrunk by variance_factor(|beta|/varsigma); for an
/// unconstrained column the untruncated varsigma^2.
std::vector<double> lambda_matrix(const ModelParams& params);

/// Gaussian-approximation marginal log likelihood: the sum over groups of
/// the N(X beta, Z Lambda Z^T + sigma^2 I) log density of y. Groups are
/// summed in first-appearance order so the reduction is deterministic.
double marginal_loglik(const Dataset& data, const ModelParams& params);

struct SimulatedDataset {
  Dataset data;
  std::vector<std::vector<double>> gamma;  // realized effects, g x p
};

/// Draw a dataset from the model: uniform covariates on covariate_range
/// (random column j duplicates covariate j), one gamma vector per group
/// (DTN for constrained columns, Normal for unconstrained) and iid Normal
/// noise. Constrained columns satisfy the sign guarantee exactly, by
/// support.
SimulatedDataset simulate_dataset(const ModelParams& truth,
                                  std::span<const std::size_t> group_sizes,
                                  const double (&covariate_range)[2],
                                  Rng& stream);

/// Maximum likelihood via Nelder-Mead on the reparameterized vector
/// (free betas, log constrained betas, log sigma2, log varsigma). Sign
/// constraints hold by construction; nonpositive columns are fitted by
/// negating the paired design columns and restoring signs afterwards.
/// Non-convergence is reported in the result, not thrown; a positive-
/// definiteness failure at the initializer propagates.
FitResult fit_mle(const Dataset& data,
                  std::span<const std::optional<ColumnConstraint>> constraints,
                  const FitOptions& options = {});

struct GroupCoefficientEstimates {
  std::vector<std::vector<double>> gamma;    // posterior modes, clamped
  std::vector<std::vector<double>> overall;  // beta + gamma where paired
};

/// Posterior-mode random effects under the Gaussian approximation,
/// clamped to the DTN support so reported overall coefficients respect
/// the sign constraint.
GroupCoefficientEstimates fitted_group_coefficients(const Dataset& data,
                                                    const ModelParams& params);

}  // namespace dtn

#endif  // DTN_MIXED_MODEL_HPP_
