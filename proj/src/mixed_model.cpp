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

#include "dtn/mixed_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>

#include "dtn/errors.hpp"
#include "dtn/special_functions.hpp"
#include "dtn/truncated_normal.hpp"

namespace dtn {
namespace {

double population_sd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Ordinary least squares through the normal equations; the Cholesky solve
// propagates NotPositiveDefiniteError when X is rank deficient.
std::vector<double> ols(const Dataset& data, double* rss_out) {
  const std::size_t m = data.rows();
  const std::size_t k = data.n_fixed();
  Matrix xtx(k, k);
  std::vector<double> xty(k, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      xty[i] += data.x(r, i) * data.y[r];
      for (std::size_t j = 0; j <= i; ++j) {
        xtx(i, j) += data.x(r, i) * data.x(r, j);
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) xtx(i, j) = xtx(j, i);
  }
  const LowerTriangular l = cholesky(xtx);
  std::vector<double> beta = xty;
  l.forward_solve(beta);
  l.backward_solve(beta);
  if (rss_out != nullptr) {
    double rss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double fit = 0.0;
      for (std::size_t i = 0; i < k; ++i) fit += data.x(r, i) * beta[i];
      rss += (data.y[r] - fit) * (data.y[r] - fit);
    }
    *rss_out = rss;
  }
  return beta;
}

struct Reparam {
  std::set<std::size_t> log_betas;  // indices of positivity-bound betas
  std::size_t k = 0;
  std::size_t p = 0;

  std::vector<double> pack(const ModelParams& params) const {
    std::vector<double> theta;
    theta.reserve(k + 1 + p);
    for (std::size_t i = 0; i < k; ++i) {
      theta.push_back(log_betas.count(i) ? std::log(params.beta[i])
                                         : params.beta[i]);
    }
    theta.push_back(std::log(params.sigma2));
    for (std::size_t j = 0; j < p; ++j) {
      theta.push_back(std::log(params.varsigma[j]));
    }
    return theta;
  }

  ModelParams unpack(
      const std::vector<double>& theta,
      std::span<const std::optional<ColumnConstraint>> constraints) const {
    ModelParams params;
    params.beta.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      params.beta[i] =
          log_betas.count(i) ? std::exp(theta[i]) : theta[i];
    }
    params.sigma2 = std::exp(theta[k]);
    params.varsigma.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      params.varsigma[j] = std::exp(theta[k + 1 + j]);
    }
    params.constraints.assign(constraints.begin(), constraints.end());
    return params;
  }
};

}  // namespace

void Dataset::validate() const {
  const std::size_t m = rows();
  if (m == 0) throw DomainError("Dataset: no rows");
  if (x.rows() != m || (n_random() > 0 && z.rows() != m) ||
      group_label.size() != m) {
    throw DomainError("Dataset: inconsistent dimensions");
  }
  if (n_fixed() == 0) throw DomainError("Dataset: no fixed-effect columns");
}

std::vector<std::vector<std::size_t>> Dataset::group_rows() const {
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t r = 0; r < group_label.size(); ++r) {
    auto [it, fresh] = index.try_emplace(group_label[r], groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(r);
  }
  return groups;
}

void ModelParams::validate() const {
  for (double b : beta) {
    if (std::isnan(b) || std::isinf(b)) {
      throw DomainError("ModelParams: beta must be finite");
    }
  }
  if (!(sigma2 > 0.0)) throw DomainError("ModelParams: sigma2 must be > 0");
  if (constraints.size() != varsigma.size()) {
    throw DomainError("ModelParams: one constraint slot per random column");
  }
  for (std::size_t j = 0; j < varsigma.size(); ++j) {
    if (!(varsigma[j] > 0.0)) {
      throw DomainError("ModelParams: varsigma must be > 0");
    }
    if (constraints[j]) {
      if (constraints[j]->beta_index >= beta.size()) {
        throw DomainError("ModelParams: constraint beta_index out of range");
      }
      const double b = beta[constraints[j]->beta_index];
      if (constraints[j]->sign == Sign::nonnegative && !(b > 0.0)) {
        throw DomainError(
            "ModelParams: nonnegative constraint needs beta > 0");
      }
      if (constraints[j]->sign == Sign::nonpositive && !(b < 0.0)) {
        throw DomainError(
            "ModelParams: nonpositive constraint needs beta < 0");
      }
    }
  }
}

std::vector<double> lambda_matrix(const ModelParams& params) {
  params.validate();
  std::vector<double> diag(params.varsigma.size());
  for (std::size_t j = 0; j < diag.size(); ++j) {
    const double v = params.varsigma[j];
    if (params.constraints[j]) {
      const double rho =
          std::fabs(params.beta[params.constraints[j]->beta_index]) / v;
      diag[j] = v * v * variance_factor(rho);
    } else {
      diag[j] = v * v;  // untruncated limit
    }
  }
  return diag;
}

double marginal_loglik(const Dataset& data, const ModelParams& params) {
  data.validate();
  if (params.beta.size() != data.n_fixed() ||
      params.varsigma.size() != data.n_random()) {
    throw DomainError("marginal_loglik: parameter/design size mismatch");
  }
  const std::vector<double> lambda = lambda_matrix(params);
  const std::size_t p = data.n_random();

  double total = 0.0;
  for (const auto& rows : data.group_rows()) {
    const std::size_t ml = rows.size();
    std::vector<double> resid(ml);
    for (std::size_t a = 0; a < ml; ++a) {
      double fit = 0.0;
      for (std::size_t i = 0; i < data.n_fixed(); ++i) {
        fit += data.x(rows[a], i) * params.beta[i];
      }
      resid[a] = data.y[rows[a]] - fit;
    }
    Matrix cov(ml, ml);
    for (std::size_t a = 0; a < ml; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
          s += lambda[j] * data.z(rows[a], j) * data.z(rows[b], j);
        }
        cov(a, b) = s;
        cov(b, a) = s;
      }
      cov(a, a) += params.sigma2;
    }
    try {
      total += gaussian_loglik_term(resid, cov);
    } catch (const NotPositiveDefiniteError& e) {
      throw NotPositiveDefiniteError(
          "marginal_loglik: covariance for group " +
              std::to_string(data.group_label[rows.front()]) +
              " is not positive definite (" + e.what() + ")",
          e.pivot_index());
    }
  }
  return total;
}

SimulatedDataset simulate_dataset(const ModelParams& truth,
                                  std::span<const std::size_t> group_sizes,
                                  const double (&covariate_range)[2],
                                  Rng& stream) {
  truth.validate();
  if (group_sizes.empty()) {
    throw DomainError("simulate_dataset: need at least one group");
  }
  for (std::size_t sz : group_sizes) {
    if (sz == 0) throw DomainError("simulate_dataset: empty group");
  }
  const std::size_t k = truth.beta.size();
  const std::size_t p = truth.varsigma.size();
  if (p > k) {
    throw DomainError(
        "simulate_dataset: random columns duplicate leading covariates, "
        "so p must not exceed k");
  }
  if (!(covariate_range[0] <= covariate_range[1]) ||
      std::isinf(covariate_range[0]) || std::isinf(covariate_range[1])) {
    throw DomainError("simulate_dataset: bad covariate range");
  }

  std::size_t m = 0;
  for (std::size_t sz : group_sizes) m += sz;

  SimulatedDataset out;
  out.data.y.resize(m);
  out.data.x = Matrix(m, k);
  out.data.z = Matrix(m, p);
  out.data.group_label.resize(m);
  out.gamma.assign(group_sizes.size(), std::vector<double>(p, 0.0));

  const double sigma = std::sqrt(truth.sigma2);
  std::size_t row = 0;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    for (std::size_t j = 0; j < p; ++j) {
      if (truth.constraints[j]) {
        const double bound =
            std::fabs(truth.beta[truth.constraints[j]->beta_index]);
        const DtnParams law{0.0, truth.varsigma[j],
                            bound / truth.varsigma[j]};
        out.gamma[g][j] = dtn_sample(law, stream);
      } else {
        out.gamma[g][j] =
            truth.varsigma[j] * inv_std_normal_cdf(stream.uniform01());
      }
    }
    for (std::size_t r = 0; r < group_sizes[g]; ++r, ++row) {
      out.data.group_label[row] = static_cast<std::int64_t>(g) + 1;
      double mean = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double v =
            stream.uniform(covariate_range[0], covariate_range[1]);
        out.data.x(row, c) = v;
        mean += v * truth.beta[c];
        if (c < p) {
          out.data.z(row, c) = v;
          mean += v * out.gamma[g][c];
        }
      }
      const double eps = sigma * inv_std_normal_cdf(stream.uniform01());
      out.data.y[row] = mean + eps;
    }
  }
  return out;
}

FitResult fit_mle(const Dataset& data,
                  std::span<const std::optional<ColumnConstraint>> constraints,
                  const FitOptions& options) {
  data.validate();
  const std::size_t k = data.n_fixed();
  const std::size_t p = data.n_random();
  if (constraints.size() != p) {
    throw DomainError("fit_mle: one constraint slot per random column");
  }
  const std::size_t free_params = k + p + 1;
  if (free_params > options.max_free_params) {
    throw DomainError("fit_mle: too many free parameters");
  }
  if (data.rows() < free_params) {
    throw DomainError("fit_mle: need at least k + p + 1 rows");
  }
  for (const auto& c : constraints) {
    if (c && c->beta_index >= k) {
      throw DomainError("fit_mle: constraint beta_index out of range");
    }
  }

  // Canonicalize to nonnegative constraints by flipping the paired design
  // columns; signs are restored on the way out.
  Dataset work = data;
  std::vector<std::optional<ColumnConstraint>> canon(constraints.begin(),
                                                     constraints.end());
  std::set<std::size_t> flipped_beta;
  for (std::size_t j = 0; j < p; ++j) {
    if (canon[j] && canon[j]->sign == Sign::nonpositive) {
      flipped_beta.insert(canon[j]->beta_index);
      canon[j]->sign = Sign::nonnegative;
    }
  }
  for (std::size_t b : flipped_beta) {
    for (std::size_t r = 0; r < work.rows(); ++r) work.x(r, b) *= -1.0;
  }
  std::set<std::size_t> flipped_z;
  for (std::size_t j = 0; j < p; ++j) {
    if (canon[j] && flipped_beta.count(canon[j]->beta_index)) {
      flipped_z.insert(j);
      for (std::size_t r = 0; r < work.rows(); ++r) work.z(r, j) *= -1.0;
    }
  }

  Reparam repar;
  repar.k = k;
  repar.p = p;
  for (const auto& c : canon) {
    if (c) repar.log_betas.insert(c->beta_index);
  }

  ModelParams start;
  if (options.init) {
    start = *options.init;
    start.constraints.assign(canon.begin(), canon.end());
    for (std::size_t b : flipped_beta) start.beta[b] *= -1.0;
    start.validate();
  } else {
    double rss = 0.0;
    start.beta = ols(work, &rss);
    const double scale = population_sd(work.y);
    for (std::size_t b : repar.log_betas) {
      start.beta[b] = std::max(start.beta[b], 0.1 * std::max(scale, 1e-8));
    }
    start.sigma2 =
        std::max(0.5 * rss / static_cast<double>(work.rows()), 1e-12);
    start.varsigma.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      start.varsigma[j] =
          canon[j] ? 0.5 * start.beta[canon[j]->beta_index]
                   : 0.5 * std::max(scale, 1e-8);
    }
    start.constraints.assign(canon.begin(), canon.end());
  }

  // Evaluated unguarded so a positive-definiteness failure at the
  // initializer surfaces to the caller instead of being masked as +inf.
  marginal_loglik(work, start);

  const auto objective = [&](const std::vector<double>& theta) {
    try {
      return -marginal_loglik(work, repar.unpack(theta, canon));
    } catch (const NotPositiveDefiniteError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> theta = repar.pack(start);
  OptimizerReport report = nelder_mead(objective, theta, options.optimizer);
  int total_iter = report.iterations;
  for (int r = 0; r < options.restarts; ++r) {
    report = nelder_mead(objective, report.best_point, options.optimizer);
    total_iter += report.iterations;
  }
  report.iterations = total_iter;

  FitResult result;
  result.params = repar.unpack(report.best_point, canon);
  result.loglik = -report.best_value;
  result.report = report;

  // Restore the caller's sign convention.
  for (std::size_t b : flipped_beta) result.params.beta[b] *= -1.0;
  result.params.constraints.assign(constraints.begin(), constraints.end());
  result.params.validate();

  result.rho.assign(p, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < p; ++j) {
    if (constraints[j]) {
      result.rho[j] = std::fabs(result.params.beta[constraints[j]->beta_index]) /
                      result.params.varsigma[j];
    }
  }
  return result;
}

GroupCoefficientEstimates fitted_group_coefficients(const Dataset& data,
                                                    const ModelParams& params) {
  data.validate();
  const std::vector<double> lambda = lambda_matrix(params);
  const std::size_t p = data.n_random();
  const auto groups = data.group_rows();

  GroupCoefficientEstimates out;
  out.gamma.reserve(groups.size());
  out.overall.reserve(groups.size());

  for (const auto& rows : groups) {
    std::vector<double> ghat(p, 0.0);
    if (p > 0) {
      Matrix a(p, p);
      std::vector<double> rhs(p, 0.0);
      for (std::size_t r : rows) {
        double resid = data.y[r];
        for (std::size_t i = 0; i < data.n_fixed(); ++i) {
          resid -= data.x(r, i) * params.beta[i];
        }
        for (std::size_t i = 0; i < p; ++i) {
          rhs[i] += data.z(r, i) * resid / params.sigma2;
          for (std::size_t j = 0; j <= i; ++j) {
            a(i, j) += data.z(r, i) * data.z(r, j) / params.sigma2;
          }
        }
      }
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) a(i, j) = a(j, i);
        a(i, i) += 1.0 / lambda[i];
      }
      const LowerTriangular l = cholesky(a);
      ghat = rhs;
      l.forward_solve(ghat);
      l.backward_solve(ghat);
      for (std::size_t j = 0; j < p; ++j) {
        if (params.constraints[j]) {
          const double bound =
              std::fabs(params.beta[params.constraints[j]->beta_index]);
          ghat[j] = std::clamp(ghat[j], -bound, bound);
        }
      }
    }
    std::vector<double> overall(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      overall[j] = params.constraints[j]
                       ? params.beta[params.constraints[j]->beta_index] +
                             ghat[j]
                       : ghat[j];
    }
    out.gamma.push_back(std::move(ghat));
    out.overall.push_back(std::move(overall));
  }
  return out;
}

}  // namespace dtn
