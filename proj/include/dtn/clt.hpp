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

#ifndef DTN_CLT_HPP_
#define DTN_CLT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtn/rng.hpp"
#include "dtn/truncated_normal.hpp"

namespace dtn {

enum class WeightSigns { positive, alternating, random_signs };

/// Recipe for a heterogeneous DTN sequence. The strictly positive lower
/// bounds on eta, rho and |weight| are what make the standardized sum
/// converge: they keep every summand's variance bounded away from zero.
struct SequenceSpec {
  std::size_t n = 0;
  double mu_range[2] = {0.0, 0.0};
  double eta_range[2] = {1.0, 1.0};
  double rho_range[2] = {1.0, 1.0};
  double weight_range[2] = {1.0, 1.0};  // bounds on |weight|
  WeightSigns weight_signs = WeightSigns::positive;
  std::uint64_t seed = 0;

  void validate() const;
};

struct WeightedDtn {
  DtnParams params;
  double weight;
};

struct CltConfig {
  SequenceSpec spec;  // spec.n is ignored; n comes from the schedule
  std::vector<std::size_t> n_schedule;
  std::size_t replications = 0;
  double epsilon = 0.0;

  void validate() const;
};

struct CltRow {
  std::size_t n = 0;
  double ks_distance = 0.0;
  double sample_mean = 0.0;
  double sample_var = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double lindeberg_sum = 0.0;
  double t_n = 0.0;
};

struct CltResult {
  std::vector<CltRow> rows;
};

/// Draw n (params, weight) pairs, each coordinate uniform over its range,
/// from a stream seeded with spec.seed. Deterministic given the spec.
std::vector<WeightedDtn> generate_sequence(const SequenceSpec& spec);

/// t_n^2 = sum_i w_i^2 Var[x_i]. Throws DomainError on an empty list.
double t_n_squared(std::span<const WeightedDtn> pairs);

/// One draw of (1/t_n) sum_i w_i (x_i - mu_i).
double standardized_sum(std::span<const WeightedDtn> pairs, Rng& stream);

/// The Lindeberg sum (1/t_n^2) sum_i E[z_i^2 1{|z_i| >= eps t_n}] for the
/// centered, weighted summands z_i = w_i (x_i - mu_i), evaluated in closed
/// form. Each truncated second moment is exactly zero once eps t_n reaches
/// the summand's support bound rho_i * |w_i| eta_i; otherwise it equals
/// 2 s_i^2 / (2 Phi(rho_i) - 1) * [G(rho_i) - G(eps t_n / s_i)] with
/// s_i = |w_i| eta_i and G(u) = Phi(u) - u phi(u), the antiderivative of
/// u^2 phi(u).
///
/// With n_override set, the pair list is tiled cyclically to that length,
/// so a small template can probe the large-n decay without regenerating
/// sequences.
double lindeberg_sum(std::span<const WeightedDtn> pairs, double epsilon,
                     std::optional<std::size_t> n_override = std::nullopt);

/// Full experiment: for every n in the schedule, regenerate a sequence with
/// a child seed derived from (base seed, n), draw `replications`
/// standardized sums (one child stream per replication), and record the KS
/// distance to N(0,1), empirical moments and the closed-form Lindeberg sum.
/// `threads` only partitions the replication loop; outputs are bit-identical
/// for any thread count.
CltResult run_clt_experiment(const CltConfig& config, int threads = 1);

}  // namespace dtn

#endif  // DTN_CLT_HPP_
