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

#include "dtn/clt.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dtn/errors.hpp"
#include "dtn/ks.hpp"
#include "dtn/special_functions.hpp"

namespace dtn {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_range(const double (&range)[2], bool positive_lower,
                 const char* name) {
  if (std::isnan(range[0]) || std::isinf(range[0]) || std::isnan(range[1]) ||
      std::isinf(range[1])) {
    throw ConfigError(std::string(name) + ": bounds must be finite", name);
  }
  if (!(range[0] <= range[1])) {
    throw ConfigError(std::string(name) + ": lower bound exceeds upper", name);
  }
  if (positive_lower && !(range[0] > 0.0)) {
    throw ConfigError(std::string(name) + ": lower bound must be positive",
                      name);
  }
}

// Integral of u^2 phi(u) du over [a, b] for 0 <= a <= b, via the
// antiderivative G(u) = Phi(u) - u phi(u). Grouped as survival-function and
// u*phi differences so the far tail keeps its (tiny) magnitude instead of
// cancelling against 1.
double tail_second_moment(double a, double b) {
  const double surv_a = 0.5 * erfc(a * kInvSqrt2);
  const double surv_b = 0.5 * erfc(b * kInvSqrt2);
  return (surv_a - surv_b) + (a * std_normal_pdf(a) - b * std_normal_pdf(b));
}

}  // namespace

void SequenceSpec::validate() const {
  if (n == 0) throw ConfigError("sequence length must be at least 1", "n");
  check_range(mu_range, false, "mu_range");
  check_range(eta_range, true, "eta_range");
  check_range(rho_range, true, "rho_range");
  check_range(weight_range, true, "weight_range");
}

void CltConfig::validate() const {
  SequenceSpec probe = spec;
  probe.n = 1;
  probe.validate();
  if (n_schedule.empty()) {
    throw ConfigError("n_schedule must be nonempty", "n_schedule");
  }
  for (std::size_t n : n_schedule) {
    if (n == 0) throw ConfigError("n_schedule entries must be >= 1",
                                  "n_schedule");
  }
  if (replications == 0) {
    throw ConfigError("replications must be >= 1", "replications");
  }
  if (!(epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive", "epsilon");
  }
}

std::vector<WeightedDtn> generate_sequence(const SequenceSpec& spec) {
  spec.validate();
  Rng stream(spec.seed);
  std::vector<WeightedDtn> pairs;
  pairs.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double mu = stream.uniform(spec.mu_range[0], spec.mu_range[1]);
    const double eta = stream.uniform(spec.eta_range[0], spec.eta_range[1]);
    const double rho = stream.uniform(spec.rho_range[0], spec.rho_range[1]);
    double weight =
        stream.uniform(spec.weight_range[0], spec.weight_range[1]);
    switch (spec.weight_signs) {
      case WeightSigns::positive:
        break;
      case WeightSigns::alternating:
        if (i % 2 == 1) weight = -weight;
        break;
      case WeightSigns::random_signs:
        if (stream.next_u64() & 1u) weight = -weight;
        break;
    }
    pairs.push_back({DtnParams{mu, eta, rho}, weight});
  }
  return pairs;
}

double t_n_squared(std::span<const WeightedDtn> pairs) {
  if (pairs.empty()) throw DomainError("t_n_squared: empty sequence");
  double acc = 0.0;
  for (const auto& [params, weight] : pairs) {
    acc += weight * weight * dtn_var(params);
  }
  return acc;
}

double standardized_sum(std::span<const WeightedDtn> pairs, Rng& stream) {
  const double t_n = std::sqrt(t_n_squared(pairs));
  double acc = 0.0;
  for (const auto& [params, weight] : pairs) {
    acc += weight * (dtn_sample(params, stream) - params.mu);
  }
  return acc / t_n;
}

double lindeberg_sum(std::span<const WeightedDtn> pairs, double epsilon,
                     std::optional<std::size_t> n_override) {
  if (!(epsilon > 0.0)) {
    throw DomainError("lindeberg_sum: epsilon must be positive");
  }
  if (pairs.empty()) throw DomainError("lindeberg_sum: empty sequence");
  const std::size_t n = n_override.value_or(pairs.size());
  if (n == 0) throw DomainError("lindeberg_sum: n_override must be >= 1");

  double s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [params, weight] = pairs[i % pairs.size()];
    s2 += weight * weight * dtn_var(params);
  }
  const double s_n = std::sqrt(s2);
  const double cut = epsilon * s_n;

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [params, weight] = pairs[i % pairs.size()];
    const double scale = std::fabs(weight) * params.eta;  // Lemma 2 (v)
    if (cut >= params.rho * scale) continue;  // indicator never fires
    const double mass = erf(params.rho * kInvSqrt2);
    acc += 2.0 * scale * scale / mass *
           tail_second_moment(cut / scale, params.rho);
  }
  return std::clamp(acc / s2, 0.0, 1.0);
}

CltResult run_clt_experiment(const CltConfig& config, int threads) {
  config.validate();
  if (threads < 1) threads = 1;

  CltResult result;
  result.rows.reserve(config.n_schedule.size());
  const std::size_t reps = config.replications;

  for (std::size_t n : config.n_schedule) {
    SequenceSpec spec = config.spec;
    spec.n = n;
    // Child seed 0 regenerates the sequence; children 1..R drive the
    // replications, so results do not depend on evaluation order.
    spec.seed = derive_seed(config.spec.seed, n, 0);
    const std::vector<WeightedDtn> pairs = generate_sequence(spec);

    std::vector<double> sums(reps);
    auto worker = [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        Rng stream(derive_seed(config.spec.seed, n, r + 1));
        sums[r] = standardized_sum(pairs, stream);
      }
    };
    if (threads == 1 || reps < 128) {
      worker(0, reps);
    } else {
      const std::size_t used = std::min<std::size_t>(threads, reps);
      std::vector<std::thread> pool;
      pool.reserve(used);
      const std::size_t chunk = (reps + used - 1) / used;
      for (std::size_t t = 0; t < used; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(reps, begin + chunk);
        if (begin < end) pool.emplace_back(worker, begin, end);
      }
      for (auto& th : pool) th.join();
    }

    CltRow row;
    row.n = n;
    row.t_n = std::sqrt(t_n_squared(pairs));
    row.ks_distance = ks_statistic_vs_std_normal(sums);
    row.lindeberg_sum = lindeberg_sum(pairs, config.epsilon);

    double mean = 0.0;
    for (double v : sums) mean += v;
    mean /= static_cast<double>(reps);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : sums) {
      const double d = v - mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
    const double r = static_cast<double>(reps);
    m2 /= r;
    m3 /= r;
    m4 /= r;
    row.sample_mean = mean;
    row.sample_var = reps > 1 ? m2 * r / (r - 1.0) : 0.0;
    row.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    row.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace dtn
