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

#include <cmath>
#include <doctest.h>
#include <vector>

#include "dtn/errors.hpp"
#include "dtn/special_functions.hpp"
#include "support/quadrature.hpp"
#include "support/reference_values.hpp"
#include "support/stats_oracles.hpp"

using namespace dtn;
using namespace dtn_test;

namespace {

SequenceSpec reference_spec(std::uint64_t seed, std::size_t n) {
  SequenceSpec spec;
  spec.n = n;
  spec.mu_range[0] = -1.0;
  spec.mu_range[1] = 1.0;
  spec.eta_range[0] = 0.5;
  spec.eta_range[1] = 2.0;
  spec.rho_range[0] = 0.5;
  spec.rho_range[1] = 3.0;
  spec.weight_range[0] = 0.5;
  spec.weight_range[1] = 2.0;
  spec.weight_signs = WeightSigns::alternating;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generate_sequence respects degenerate ranges exactly") {
  SequenceSpec spec;
  spec.n = 8;
  spec.mu_range[0] = spec.mu_range[1] = 0.25;
  spec.eta_range[0] = spec.eta_range[1] = 1.5;
  spec.rho_range[0] = spec.rho_range[1] = 2.0;
  spec.weight_range[0] = spec.weight_range[1] = 0.75;
  spec.seed = 1;
  for (const auto& [params, weight] : generate_sequence(spec)) {
    CHECK(params.mu == 0.25);
    CHECK(params.eta == 1.5);
    CHECK(params.rho == 2.0);
    CHECK(weight == 0.75);
  }
}

TEST_CASE("generate_sequence keeps every draw inside the stated bounds") {
  const SequenceSpec spec = reference_spec(77, 500);
  const auto pairs = generate_sequence(spec);
  REQUIRE(pairs.size() == 500);
  for (const auto& [params, weight] : pairs) {
    CHECK(params.mu >= -1.0);
    CHECK(params.mu <= 1.0);
    CHECK(params.eta >= 0.5);
    CHECK(params.eta <= 2.0);
    CHECK(params.rho >= 0.5);
    CHECK(params.rho <= 3.0);
    CHECK(std::fabs(weight) >= 0.5);
    CHECK(std::fabs(weight) <= 2.0);
  }
}

TEST_CASE("generate_sequence is deterministic and alternates signs") {
  const SequenceSpec spec = reference_spec(123, 64);
  const auto a = generate_sequence(spec);
  const auto b = generate_sequence(spec);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].params.mu == b[i].params.mu);
    CHECK(a[i].weight == b[i].weight);
    CHECK((i % 2 == 0 ? a[i].weight > 0.0 : a[i].weight < 0.0));
  }
}

TEST_CASE("spec validation points at the offending field") {
  SequenceSpec spec = reference_spec(1, 10);
  spec.rho_range[0] = 0.0;
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == std::string("rho_range"));
  }
  CltConfig config;
  config.spec = reference_spec(1, 10);
  config.n_schedule = {10};
  config.replications = 5;
  config.epsilon = 0.0;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == std::string("epsilon"));
  }
}

TEST_CASE("t_n_squared: reference value, additivity, weight homogeneity") {
  const WeightedDtn one{DtnParams{0.0, 1.0, 1.0}, 1.0};
  std::vector<WeightedDtn> single{one};
  CHECK(t_n_squared(single) == doctest::Approx(kVf1).epsilon(1e-13));

  std::vector<WeightedDtn> many(7, one);
  CHECK(t_n_squared(many) ==
        doctest::Approx(7.0 * t_n_squared(single)).epsilon(1e-14));

  std::vector<WeightedDtn> doubled = many;
  for (auto& p : doubled) p.weight *= 2.0;
  CHECK(t_n_squared(doubled) ==
        doctest::Approx(4.0 * t_n_squared(many)).epsilon(1e-14));

  const std::vector<WeightedDtn> empty;
  CHECK_THROWS_AS(t_n_squared(empty), DomainError);
}

TEST_CASE("standardized_sum is bounded by the support") {
  const DtnParams p{0.3, 1.2, 1.4};
  const std::vector<WeightedDtn> single{{p, 1.0}};
  const double bound = p.rho * p.eta / std::sqrt(dtn_var(p));
  Rng stream(5);
  for (int i = 0; i < 5000; ++i) {
    const double s = standardized_sum(single, stream);
    CHECK(std::fabs(s) <= bound);
    CHECK(std::isfinite(s));
  }
}

TEST_CASE("standardized_sum replications have mean 0 and variance 1") {
  const auto pairs = generate_sequence(reference_spec(2026, 40));
  const std::size_t reps = 20000;
  std::vector<double> sums(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng stream(derive_seed(2026, 40, r + 1));
    sums[r] = standardized_sum(pairs, stream);
  }
  const double root_r = std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(sample_mean(sums)) <= 4.0 / root_r);
  CHECK(std::fabs(sample_variance(sums) - 1.0) <= 5.0 / root_r);
}

TEST_CASE("lindeberg_sum: exact zero once the cutoff clears the support") {
  const auto pairs = generate_sequence(reference_spec(31, 25));
  double max_support = 0.0;
  for (const auto& [params, weight] : pairs) {
    max_support =
        std::max(max_support, params.rho * std::fabs(weight) * params.eta);
  }
  const double t_n = std::sqrt(t_n_squared(pairs));
  const double eps_zero = max_support / t_n * 1.000001;
  CHECK(lindeberg_sum(pairs, eps_zero) == 0.0);
  CHECK(lindeberg_sum(pairs, eps_zero * 0.9) > 0.0);
}

TEST_CASE("lindeberg_sum tends to one as epsilon vanishes") {
  const auto pairs = generate_sequence(reference_spec(32, 10));
  const double v = lindeberg_sum(pairs, 1e-12);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v <= 1.0);
}

TEST_CASE("lindeberg_sum single-summand reference value") {
  const DtnParams p{0.0, 1.0, 2.0};
  const std::vector<WeightedDtn> single{{p, 1.0}};
  const double s_n = std::sqrt(dtn_var(p));
  const double eps = 1.0 / s_n;  // cutoff eps * s_n = 1
  CHECK(lindeberg_sum(single, eps) ==
        doctest::Approx(kLindebergDtn012Cut1).epsilon(1e-12));
  // quadrature oracle: 2 * int_1^2 y^2 f(y) dy / Var
  const double integral = adaptive_simpson(
      [&](double y) { return y * y * dtn_pdf(y, p); }, 1.0, 2.0, 1e-12);
  CHECK(lindeberg_sum(single, eps) ==
        doctest::Approx(2.0 * integral / dtn_var(p)).epsilon(1e-9));
}

TEST_CASE("lindeberg_sum matches quadrature on seeded single-pair cases") {
  Rng rng(606);
  for (int rep = 0; rep < 50; ++rep) {
    const DtnParams p{0.0, rng.uniform(0.3, 2.5), rng.uniform(0.3, 4.0)};
    const double w = rng.uniform(0.5, 2.0) * (rep % 2 == 0 ? 1.0 : -1.0);
    const std::vector<WeightedDtn> single{{p, w}};
    const double s_n = std::fabs(w) * std::sqrt(dtn_var(p));
    const double eps = rng.uniform(0.05, 1.2) * p.rho * p.eta *
                       std::fabs(w) / s_n;  // cutoff inside the support
    const double closed = lindeberg_sum(single, eps);
    // centered weighted summand has law DTN(0, (w eta)^2, rho)
    const DtnParams z{0.0, std::fabs(w) * p.eta, p.rho};
    const double cut = eps * s_n;
    const double integral =
        cut >= z.upper()
            ? 0.0
            : adaptive_simpson(
                  [&](double y) { return y * y * dtn_pdf(y, z); }, cut,
                  z.upper(), 1e-13);
    const double oracle = 2.0 * integral / (w * w * dtn_var(p));
    CAPTURE(p.eta);
    CAPTURE(p.rho);
    CAPTURE(eps);
    CHECK(std::fabs(closed - oracle) <= 1e-8);
  }
}

TEST_CASE("lindeberg_sum is nonincreasing in epsilon") {
  const auto pairs = generate_sequence(reference_spec(33, 30));
  double prev = 1.0 + 1e-12;
  for (double eps = 0.01; eps <= 2.0; eps += 0.01) {
    const double cur = lindeberg_sum(pairs, eps);
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(lindeberg_sum(pairs, 0.0), DomainError);
  CHECK_THROWS_AS(lindeberg_sum(pairs, -1.0), DomainError);
}

TEST_CASE("lindeberg_sum n_override tiles the template") {
  const DtnParams p{0.0, 1.0, 2.0};
  const std::vector<WeightedDtn> single{{p, 1.5}};
  const std::vector<WeightedDtn> eight(8, single[0]);
  CHECK(lindeberg_sum(single, 0.4, 8) ==
        doctest::Approx(lindeberg_sum(eight, 0.4)).epsilon(1e-15));
  // the tiled sum decays with n at fixed epsilon
  double prev = lindeberg_sum(single, 0.25, 1);
  for (std::size_t n : {4, 16, 64, 256}) {
    const double cur = lindeberg_sum(single, 0.25, n);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("run_clt_experiment: standardized variance at n = 1") {
  CltConfig config;
  config.spec = reference_spec(99, 1);
  config.spec.mu_range[0] = config.spec.mu_range[1] = 0.0;
  config.spec.eta_range[0] = config.spec.eta_range[1] = 1.0;
  config.spec.rho_range[0] = config.spec.rho_range[1] = 1.0;
  config.spec.weight_range[0] = config.spec.weight_range[1] = 1.0;
  config.n_schedule = {1};
  config.replications = 100000;
  config.epsilon = 0.25;
  const CltResult result = run_clt_experiment(config);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].n == 1);
  CHECK(std::fabs(result.rows[0].sample_var - 1.0) <= 0.02);
  CHECK(std::fabs(result.rows[0].sample_mean) <= 0.02);
  CHECK(result.rows[0].t_n ==
        doctest::Approx(std::sqrt(kVf1)).epsilon(1e-12));
}

TEST_CASE("run_clt_experiment: large rho at n = 1 is already Normal") {
  CltConfig config;
  config.spec = reference_spec(1234, 1);
  config.spec.mu_range[0] = config.spec.mu_range[1] = 0.0;
  config.spec.eta_range[0] = config.spec.eta_range[1] = 1.0;
  config.spec.rho_range[0] = config.spec.rho_range[1] = 40.0;
  config.spec.weight_range[0] = config.spec.weight_range[1] = 1.0;
  config.n_schedule = {1};
  config.replications = 100000;
  config.epsilon = 0.25;
  const CltResult result = run_clt_experiment(config);
  CHECK(result.rows[0].ks_distance < 0.006);
}

TEST_CASE("run_clt_experiment is bit-identical across thread counts") {
  CltConfig config;
  config.spec = reference_spec(555, 0);
  config.n_schedule = {5, 50};
  config.replications = 4000;
  config.epsilon = 0.25;
  const CltResult serial = run_clt_experiment(config, 1);
  const CltResult threaded = run_clt_experiment(config, 4);
  const CltResult again = run_clt_experiment(config, 1);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].ks_distance == threaded.rows[i].ks_distance);
    CHECK(serial.rows[i].sample_mean == threaded.rows[i].sample_mean);
    CHECK(serial.rows[i].sample_var == threaded.rows[i].sample_var);
    CHECK(serial.rows[i].skewness == threaded.rows[i].skewness);
    CHECK(serial.rows[i].excess_kurtosis == threaded.rows[i].excess_kurtosis);
    CHECK(serial.rows[i].lindeberg_sum == again.rows[i].lindeberg_sum);
    CHECK(serial.rows[i].t_n == threaded.rows[i].t_n);
  }
}

TEST_CASE("moment diagnostics trend toward Normal values with n") {
  CltConfig config;
  config.spec = reference_spec(2468, 0);
  config.n_schedule = {5, 500};
  config.replications = 20000;
  config.epsilon = 0.25;
  const CltResult result = run_clt_experiment(config);
  // excess kurtosis of a bounded-summand sum starts negative and shrinks
  CHECK(std::fabs(result.rows[1].excess_kurtosis) <
        std::fabs(result.rows[0].excess_kurtosis));
  CHECK(std::fabs(result.rows[1].excess_kurtosis) < 0.1);
  CHECK(std::fabs(result.rows[1].skewness) < 0.1);
}

TEST_CASE("mean KS over seeds shrinks from n = 10 to n = 400") {
  double ks_small = 0.0, ks_large = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CltConfig config;
    config.spec = reference_spec(seed, 0);
    config.n_schedule = {10, 400};
    config.replications = 3000;
    config.epsilon = 0.25;
    const CltResult result = run_clt_experiment(config);
    ks_small += result.rows[0].ks_distance;
    ks_large += result.rows[1].ks_distance;
  }
  CHECK(ks_large < ks_small);
}
