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

#include "dtn/dtn.h"

#include <cstring>
#include <limits>
#include <new>
#include <string>

#include <json.hpp>

#include "dtn/clt.hpp"
#include "dtn/errors.hpp"
#include "dtn/mixed_model.hpp"
#include "dtn/rng.hpp"
#include "dtn/truncated_normal.hpp"

using json = nlohmann::json;

struct dtn_rng {
  dtn::Rng stream;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const dtn::ConfigError& e) {
    set_error(e.what());
    return DTN_ERR_CONFIG;
  } catch (const dtn::NotPositiveDefiniteError& e) {
    set_error(e.what());
    return DTN_ERR_NOT_POSITIVE_DEFINITE;
  } catch (const dtn::DomainError& e) {
    set_error(e.what());
    return DTN_ERR_DOMAIN;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DTN_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// --- JSON access helpers; every failure names the offending key ---

json parse_json(const char* text, const char* what) {
  if (text == nullptr) {
    throw dtn::ConfigError(std::string(what) + ": null config", what);
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw dtn::ConfigError(std::string(what) + ": invalid JSON", what);
  }
  return j;
}

const json& require(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) {
    throw dtn::ConfigError("missing required key: " + key, key);
  }
  return j.at(key);
}

double require_number(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number()) {
    throw dtn::ConfigError("key must be a number: " + key, key);
  }
  return v.get<double>();
}

std::uint64_t require_uint(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                   v.get<std::int64_t>() >= 0)) {
    throw dtn::ConfigError("key must be a nonnegative integer: " + key, key);
  }
  return v.get<std::uint64_t>();
}

void read_range(const json& j, const std::string& key, double (&out)[2]) {
  const json& v = require(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw dtn::ConfigError("key must be a [lo, hi] pair: " + key, key);
  }
  out[0] = v[0].get<double>();
  out[1] = v[1].get<double>();
}

std::vector<double> require_number_array(const json& j,
                                         const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_array()) {
    throw dtn::ConfigError("key must be an array: " + key, key);
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw dtn::ConfigError("key must hold numbers: " + key, key);
    }
    out.push_back(e.get<double>());
  }
  return out;
}

dtn::Sign parse_sign(const json& j, const std::string& key) {
  const json& v = require(j, key);
  const std::string s = v.is_string() ? v.get<std::string>() : "";
  if (s == "nonnegative") return dtn::Sign::nonnegative;
  if (s == "nonpositive") return dtn::Sign::nonpositive;
  throw dtn::ConfigError(
      "key must be \"nonnegative\" or \"nonpositive\": " + key, key);
}

// --- config translation ---

dtn::CltConfig parse_clt_config(const json& j) {
  dtn::CltConfig config;
  const json& seq = require(j, "sequence");
  read_range(seq, "mu_range", config.spec.mu_range);
  read_range(seq, "eta_range", config.spec.eta_range);
  read_range(seq, "rho_range", config.spec.rho_range);
  read_range(seq, "weight_range", config.spec.weight_range);
  config.spec.seed = require_uint(seq, "seed");
  config.spec.weight_signs = dtn::WeightSigns::positive;
  if (seq.contains("weight_signs")) {
    const std::string s = seq.at("weight_signs").is_string()
                              ? seq.at("weight_signs").get<std::string>()
                              : "";
    if (s == "positive") {
      config.spec.weight_signs = dtn::WeightSigns::positive;
    } else if (s == "alternating") {
      config.spec.weight_signs = dtn::WeightSigns::alternating;
    } else if (s == "random") {
      config.spec.weight_signs = dtn::WeightSigns::random_signs;
    } else {
      throw dtn::ConfigError(
          "weight_signs must be \"positive\", \"alternating\" or \"random\"",
          "weight_signs");
    }
  }
  const json& schedule = require(j, "n_schedule");
  if (!schedule.is_array() || schedule.empty()) {
    throw dtn::ConfigError("n_schedule must be a nonempty array",
                           "n_schedule");
  }
  for (const auto& e : schedule) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1) {
      throw dtn::ConfigError("n_schedule entries must be integers >= 1",
                             "n_schedule");
    }
    config.n_schedule.push_back(e.get<std::size_t>());
  }
  config.replications = require_uint(j, "replications");
  config.epsilon = require_number(j, "epsilon");
  config.validate();
  return config;
}

struct SimulateConfig {
  dtn::ModelParams truth;
  std::vector<std::size_t> group_sizes;
  double covariate_range[2] = {-1.0, 1.0};
  std::uint64_t seed = 0;
};

SimulateConfig parse_simulate_config(const json& j) {
  SimulateConfig config;
  config.truth.beta = require_number_array(j, "beta");
  config.truth.sigma2 = require_number(j, "sigma2");
  config.truth.varsigma = require_number_array(j, "varsigma");
  config.truth.constraints.assign(config.truth.varsigma.size(), std::nullopt);
  if (j.contains("constrained")) {
    const json& cons = j.at("constrained");
    if (!cons.is_array()) {
      throw dtn::ConfigError("constrained must be an array", "constrained");
    }
    for (const auto& c : cons) {
      const auto column = require_uint(c, "column");
      if (column >= config.truth.varsigma.size()) {
        throw dtn::ConfigError("constrained column out of range", "column");
      }
      // Random column j duplicates covariate j, so the bounding coefficient
      // is beta[column].
      config.truth.constraints[column] =
          dtn::ColumnConstraint{column, parse_sign(c, "sign")};
    }
  }

  const auto groups = require_uint(j, "groups");
  if (groups == 0) {
    throw dtn::ConfigError("groups must be >= 1", "groups");
  }
  if (j.contains("group_sizes")) {
    const json& sizes = j.at("group_sizes");
    if (!sizes.is_array() || sizes.size() != groups) {
      throw dtn::ConfigError("group_sizes must be an array of length groups",
                             "group_sizes");
    }
    for (const auto& e : sizes) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 1) {
        throw dtn::ConfigError("group_sizes entries must be integers >= 1",
                               "group_sizes");
      }
      config.group_sizes.push_back(e.get<std::size_t>());
    }
  } else {
    const auto size = require_uint(j, "group_size");
    if (size == 0) {
      throw dtn::ConfigError("group_size must be >= 1", "group_size");
    }
    config.group_sizes.assign(groups, size);
  }
  if (j.contains("covariate_range")) {
    read_range(j, "covariate_range", config.covariate_range);
  }
  config.seed = require_uint(j, "seed");

  try {
    config.truth.validate();
  } catch (const dtn::DomainError& e) {
    throw dtn::ConfigError(e.what(), "beta");
  }
  return config;
}

}  // namespace

extern "C" {

const char* dtn_version(void) { return "dtn 1.0.0"; }

const char* dtn_last_error(void) { return g_last_error.c_str(); }

void dtn_string_free(char* s) { delete[] s; }

int dtn_pdf(double mu, double eta, double rho, double x, double* out) {
  return guarded([&] {
    *out = dtn::dtn_pdf(x, dtn::DtnParams{mu, eta, rho});
    return DTN_OK;
  });
}

int dtn_cdf(double mu, double eta, double rho, double x, double* out) {
  return guarded([&] {
    *out = dtn::dtn_cdf(x, dtn::DtnParams{mu, eta, rho});
    return DTN_OK;
  });
}

int dtn_quantile(double mu, double eta, double rho, double q, double* out) {
  return guarded([&] {
    *out = dtn::dtn_quantile(q, dtn::DtnParams{mu, eta, rho});
    return DTN_OK;
  });
}

int dtn_mean(double mu, double eta, double rho, double* out) {
  return guarded([&] {
    *out = dtn::dtn_mean(dtn::DtnParams{mu, eta, rho});
    return DTN_OK;
  });
}

int dtn_var(double mu, double eta, double rho, double* out) {
  return guarded([&] {
    *out = dtn::dtn_var(dtn::DtnParams{mu, eta, rho});
    return DTN_OK;
  });
}

int dtn_variance_factor(double rho, double* out) {
  return guarded([&] {
    *out = dtn::variance_factor(rho);
    return DTN_OK;
  });
}

int dtn_affine(double eta, double rho, double k0, double k1, double* out_mu,
               double* out_eta, double* out_rho) {
  return guarded([&] {
    const dtn::DtnParams p =
        dtn::affine(dtn::DtnParams{0.0, eta, rho}, k0, k1);
    *out_mu = p.mu;
    *out_eta = p.eta;
    *out_rho = p.rho;
    return DTN_OK;
  });
}

int dtn_tn_pdf(double mu, double eta, double a, double b, double x,
               double* out) {
  return guarded([&] {
    *out = dtn::tn_pdf(x, dtn::TnParams{mu, eta, a, b});
    return DTN_OK;
  });
}

int dtn_tn_mean(double mu, double eta, double a, double b, double* out) {
  return guarded([&] {
    *out = dtn::tn_mean(dtn::TnParams{mu, eta, a, b});
    return DTN_OK;
  });
}

int dtn_tn_var(double mu, double eta, double a, double b, double* out) {
  return guarded([&] {
    *out = dtn::tn_var(dtn::TnParams{mu, eta, a, b});
    return DTN_OK;
  });
}

dtn_rng* dtn_rng_new(uint64_t seed) {
  return new (std::nothrow) dtn_rng{dtn::Rng(seed)};
}

void dtn_rng_free(dtn_rng* rng) { delete rng; }

int dtn_sample(double mu, double eta, double rho, dtn_rng* rng, size_t count,
               double* out) {
  return guarded([&] {
    if (rng == nullptr) throw dtn::DomainError("dtn_sample: null rng");
    const dtn::DtnParams p{mu, eta, rho};
    p.validate();
    for (size_t i = 0; i < count; ++i) {
      out[i] = dtn::dtn_sample(p, rng->stream);
    }
    return DTN_OK;
  });
}

int dtn_clt_run(const char* config_json, int threads, char** result_json) {
  return guarded([&] {
    const json j = parse_json(config_json, "clt config");
    const dtn::CltConfig config = parse_clt_config(j);
    const dtn::CltResult result = dtn::run_clt_experiment(config, threads);

    json rows = json::array();
    for (const auto& row : result.rows) {
      rows.push_back({{"n", row.n},
                      {"ks_distance", row.ks_distance},
                      {"sample_mean", row.sample_mean},
                      {"sample_var", row.sample_var},
                      {"skewness", row.skewness},
                      {"excess_kurtosis", row.excess_kurtosis},
                      {"lindeberg_sum", row.lindeberg_sum},
                      {"t_n", row.t_n}});
    }
    const json out = {{"epsilon", config.epsilon},
                      {"replications", config.replications},
                      {"seed", config.spec.seed},
                      {"rows", rows}};
    *result_json = copy_string(out.dump(2) + "\n");
    return DTN_OK;
  });
}

int dtn_simulate_dims(const char* config_json, size_t* m, size_t* k,
                      size_t* p, size_t* g) {
  return guarded([&] {
    const SimulateConfig config =
        parse_simulate_config(parse_json(config_json, "simulate config"));
    size_t total = 0;
    for (size_t sz : config.group_sizes) total += sz;
    *m = total;
    *k = config.truth.beta.size();
    *p = config.truth.varsigma.size();
    *g = config.group_sizes.size();
    return DTN_OK;
  });
}

int dtn_simulate(const char* config_json, double* y, double* x, double* z,
                 int64_t* group, double* gamma) {
  return guarded([&] {
    const SimulateConfig config =
        parse_simulate_config(parse_json(config_json, "simulate config"));
    dtn::Rng stream(config.seed);
    const dtn::SimulatedDataset sim = dtn::simulate_dataset(
        config.truth, config.group_sizes, config.covariate_range, stream);

    const size_t m = sim.data.rows();
    const size_t k = sim.data.n_fixed();
    const size_t p = sim.data.n_random();
    for (size_t r = 0; r < m; ++r) {
      y[r] = sim.data.y[r];
      group[r] = sim.data.group_label[r];
      for (size_t c = 0; c < k; ++c) x[r * k + c] = sim.data.x(r, c);
      for (size_t c = 0; c < p; ++c) z[r * p + c] = sim.data.z(r, c);
    }
    for (size_t gi = 0; gi < sim.gamma.size(); ++gi) {
      for (size_t c = 0; c < p; ++c) gamma[gi * p + c] = sim.gamma[gi][c];
    }
    return DTN_OK;
  });
}

int dtn_fit(const double* y, const double* x, const double* z,
            const int64_t* group, size_t m, size_t k, size_t p,
            const char* options_json, char** result_json) {
  return guarded([&] {
    dtn::Dataset data;
    data.y.assign(y, y + m);
    data.x = dtn::Matrix(m, k);
    data.z = dtn::Matrix(m, p);
    data.group_label.assign(group, group + m);
    for (size_t r = 0; r < m; ++r) {
      for (size_t c = 0; c < k; ++c) data.x(r, c) = x[r * k + c];
      for (size_t c = 0; c < p; ++c) data.z(r, c) = z[r * p + c];
    }

    std::vector<std::optional<dtn::ColumnConstraint>> constraints(
        p, std::nullopt);
    dtn::FitOptions options;
    if (options_json != nullptr && options_json[0] != '\0') {
      const json j = parse_json(options_json, "fit options");
      if (j.contains("constraints")) {
        const json& cons = j.at("constraints");
        if (!cons.is_array()) {
          throw dtn::ConfigError("constraints must be an array",
                                 "constraints");
        }
        for (const auto& c : cons) {
          const auto column = require_uint(c, "z_column");
          const auto beta_index = require_uint(c, "beta_index");
          if (column >= p) {
            throw dtn::ConfigError("constraint z_column out of range",
                                   "z_column");
          }
          if (beta_index >= k) {
            throw dtn::ConfigError("constraint beta_index out of range",
                                   "beta_index");
          }
          constraints[column] = dtn::ColumnConstraint{
              static_cast<std::size_t>(beta_index), parse_sign(c, "sign")};
        }
      }
      if (j.contains("optimizer")) {
        const json& opt = j.at("optimizer");
        if (opt.contains("max_iter")) {
          options.optimizer.max_iter = opt.at("max_iter").get<int>();
        }
        if (opt.contains("diameter_tol")) {
          options.optimizer.diameter_tol =
              opt.at("diameter_tol").get<double>();
        }
        if (opt.contains("value_tol")) {
          options.optimizer.value_tol = opt.at("value_tol").get<double>();
        }
      }
      if (j.contains("restarts")) {
        options.restarts = j.at("restarts").get<int>();
      }
      if (j.contains("init")) {
        const json& init = j.at("init");
        dtn::ModelParams start;
        start.beta = require_number_array(init, "beta");
        start.sigma2 = require_number(init, "sigma2");
        start.varsigma = require_number_array(init, "varsigma");
        if (start.beta.size() != k || start.varsigma.size() != p) {
          throw dtn::ConfigError("init has wrong parameter dimensions",
                                 "init");
        }
        start.constraints = constraints;
        options.init = std::move(start);
      }
    }

    const dtn::FitResult fit = dtn::fit_mle(data, constraints, options);

    json rho = json::array();
    for (double r : fit.rho) {
      if (std::isnan(r)) {
        rho.push_back(nullptr);
      } else {
        rho.push_back(r);
      }
    }
    const char* termination = "max_iter";
    if (fit.report.termination == dtn::Termination::tolerance_met) {
      termination = "tolerance_met";
    } else if (fit.report.termination ==
               dtn::Termination::degenerate_simplex) {
      termination = "degenerate_simplex";
    }
    const json out = {
        {"beta", fit.params.beta},
        {"sigma2", fit.params.sigma2},
        {"varsigma", fit.params.varsigma},
        {"rho", rho},
        {"loglik", fit.loglik},
        {"converged", fit.report.converged},
        {"iterations", fit.report.iterations},
        {"termination", termination},
        {"final_simplex_spread", fit.report.final_value_spread},
        {"final_simplex_diameter", fit.report.final_diameter}};
    *result_json = copy_string(out.dump(2) + "\n");
    return fit.report.converged ? DTN_OK : DTN_ERR_NONCONVERGED;
  });
}

}  // extern "C"
