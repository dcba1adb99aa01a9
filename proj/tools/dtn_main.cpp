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

// Command-line front end. All numerics live behind the C API in dtn/dtn.h;
// this translation unit only parses flags, moves bytes between files and
// the library, and maps library status codes onto the exit-code contract:
//   0 success, 1 I/O failure, 2 configuration/schema error,
//   3 fit did not converge (result still written), 4 numerical failure.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtn/dtn.h"

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConverged = 3;
constexpr int kExitNumerical = 4;

// 17 significant digits round-trip any double exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int map_status(int status) {
  switch (status) {
    case DTN_OK:
      return kExitOk;
    case DTN_ERR_CONFIG:
    case DTN_ERR_DOMAIN:
      return kExitConfig;
    case DTN_ERR_NONCONVERGED:
      return kExitNonConverged;
    default:
      return kExitNumerical;
  }
}

int fail(int exit_code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return exit_code;
}

int fail_status(int status) {
  return fail(map_status(status), dtn_last_error());
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

// Writes to the path, or to stdout when the path is empty.
int emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return kExitOk;
  }
  if (!write_file(path, content)) {
    return fail(kExitIo, "cannot write " + path);
  }
  return kExitOk;
}

// Owned string coming back from the library.
struct LibString {
  char* ptr = nullptr;
  ~LibString() { dtn_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? "" : ptr; }
};

// --- dataset CSV (schema: group,y,x1..xk,z1..zp; header mandatory) ---

struct CsvTable {
  std::vector<std::string> columns;  // names after group,y
  std::vector<std::string> group;
  std::vector<double> y;
  std::vector<std::vector<double>> values;  // per row, aligned with columns
};

bool parse_double(const std::string& token, double* out) {
  if (token.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<CsvTable> parse_dataset_csv(const std::string& text,
                                          std::string* error) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (lineno == 1) {
      if (fields.size() < 3 || fields[0] != "group" || fields[1] != "y") {
        *error = "header must start with group,y";
        return std::nullopt;
      }
      table.columns.assign(fields.begin() + 2, fields.end());
      continue;
    }
    if (fields.size() != table.columns.size() + 2) {
      *error = "line " + std::to_string(lineno) + ": wrong field count";
      return std::nullopt;
    }
    table.group.push_back(fields[0]);
    double yv = 0.0;
    if (!parse_double(fields[1], &yv)) {
      *error = "line " + std::to_string(lineno) + ": bad y value";
      return std::nullopt;
    }
    table.y.push_back(yv);
    std::vector<double> row(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!parse_double(fields[c + 2], &row[c])) {
        *error = "line " + std::to_string(lineno) + ": bad numeric value";
        return std::nullopt;
      }
    }
    table.values.push_back(std::move(row));
  }
  if (table.columns.empty() && table.y.empty()) {
    *error = "empty CSV";
    return std::nullopt;
  }
  if (table.y.empty()) {
    *error = "CSV has a header but no data rows";
    return std::nullopt;
  }
  return table;
}

int column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.columns[c] == name) return static_cast<int>(c);
  }
  return -1;
}

// --- subcommand payloads ---

struct DistArgs {
  double mu = 0.0, eta = 1.0, rho = 1.0;
  std::vector<double> at;
  std::string output;
};

int run_dist(const DistArgs& args) {
  double mean = 0.0, var = 0.0;
  int status = dtn_mean(args.mu, args.eta, args.rho, &mean);
  if (status == DTN_OK) status = dtn_var(args.mu, args.eta, args.rho, &var);
  if (status != DTN_OK) return fail_status(status);

  std::string out = "x,pdf,cdf,mean,variance\n";
  for (double x : args.at) {
    double pdf = 0.0, cdf = 0.0;
    status = dtn_pdf(args.mu, args.eta, args.rho, x, &pdf);
    if (status == DTN_OK) {
      status = dtn_cdf(args.mu, args.eta, args.rho, x, &cdf);
    }
    if (status != DTN_OK) return fail_status(status);
    out += fmt(x) + "," + fmt(pdf) + "," + fmt(cdf) + "," + fmt(mean) + "," +
           fmt(var) + "\n";
  }
  return emit(args.output, out);
}

struct SampleArgs {
  double mu = 0.0, eta = 1.0, rho = 1.0;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  std::string output;
};

int run_sample(const SampleArgs& args) {
  std::vector<double> draws(args.count);
  dtn_rng* rng = dtn_rng_new(args.seed);
  if (rng == nullptr) return fail(kExitNumerical, "rng allocation failed");
  const int status =
      dtn_sample(args.mu, args.eta, args.rho, rng, draws.size(), draws.data());
  dtn_rng_free(rng);
  if (status != DTN_OK) return fail_status(status);

  std::string out;
  out.reserve(draws.size() * 20);
  for (double v : draws) {
    out += fmt(v);
    out += '\n';
  }
  return emit(args.output, out);
}

struct CltArgs {
  std::string config_path;
  std::string output;  // base path; writes .json, .csv and _long.csv
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

int run_clt(const CltArgs& args) {
  const auto text = read_file(args.config_path);
  if (!text) return fail(kExitIo, "cannot read " + args.config_path);

  std::string config_text = *text;
  if (args.seed) {
    json j = json::parse(config_text, nullptr, false);
    if (j.is_discarded()) return fail(kExitConfig, "config is not valid JSON");
    if (!j.contains("sequence") || !j["sequence"].is_object()) {
      return fail(kExitConfig, "missing required key: sequence");
    }
    j["sequence"]["seed"] = *args.seed;
    config_text = j.dump();
  }

  LibString result;
  const int status = dtn_clt_run(config_text.c_str(), args.threads,
                                 &result.ptr);
  if (status != DTN_OK) return fail_status(status);

  const json parsed = json::parse(result.str());
  static const char* kMetrics[] = {"ks_distance",     "sample_mean",
                                   "sample_var",      "skewness",
                                   "excess_kurtosis", "lindeberg_sum",
                                   "t_n"};
  std::string wide = "n";
  for (const char* metric : kMetrics) wide += std::string(",") + metric;
  wide += "\n";
  std::string longfmt = "n,metric,value\n";
  for (const auto& row : parsed.at("rows")) {
    const std::string n = std::to_string(row.at("n").get<std::uint64_t>());
    wide += n;
    for (const char* metric : kMetrics) {
      const double v = row.at(metric).get<double>();
      wide += "," + fmt(v);
      longfmt += n + "," + metric + "," + fmt(v) + "\n";
    }
    wide += "\n";
  }

  if (!write_file(args.output + ".json", result.str())) {
    return fail(kExitIo, "cannot write " + args.output + ".json");
  }
  if (!write_file(args.output + ".csv", wide)) {
    return fail(kExitIo, "cannot write " + args.output + ".csv");
  }
  if (!write_file(args.output + "_long.csv", longfmt)) {
    return fail(kExitIo, "cannot write " + args.output + "_long.csv");
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string config_path;
  std::string output;
  std::string sidecar;
  std::optional<std::uint64_t> seed;
};

std::string default_sidecar_path(const std::string& output) {
  const std::size_t slash = output.find_last_of('/');
  const std::size_t dot = output.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return output + ".truth.json";
  }
  return output.substr(0, dot) + ".truth.json";
}

int run_simulate(const SimulateArgs& args) {
  const auto text = read_file(args.config_path);
  if (!text) return fail(kExitIo, "cannot read " + args.config_path);

  json config = json::parse(*text, nullptr, false);
  if (config.is_discarded()) {
    return fail(kExitConfig, "config is not valid JSON");
  }
  if (args.seed) config["seed"] = *args.seed;
  const std::string config_text = config.dump();

  size_t m = 0, k = 0, p = 0, g = 0;
  int status = dtn_simulate_dims(config_text.c_str(), &m, &k, &p, &g);
  if (status != DTN_OK) return fail_status(status);

  std::vector<double> y(m), x(m * k), z(m * p), gamma(g * p);
  std::vector<std::int64_t> group(m);
  status = dtn_simulate(config_text.c_str(), y.data(), x.data(), z.data(),
                        group.data(), gamma.data());
  if (status != DTN_OK) return fail_status(status);

  std::string csv = "group,y";
  for (size_t c = 0; c < k; ++c) csv += ",x" + std::to_string(c + 1);
  for (size_t c = 0; c < p; ++c) csv += ",z" + std::to_string(c + 1);
  csv += "\n";
  for (size_t r = 0; r < m; ++r) {
    csv += std::to_string(group[r]) + "," + fmt(y[r]);
    for (size_t c = 0; c < k; ++c) csv += "," + fmt(x[r * k + c]);
    for (size_t c = 0; c < p; ++c) csv += "," + fmt(z[r * p + c]);
    csv += "\n";
  }

  json gamma_rows = json::array();
  for (size_t gi = 0; gi < g; ++gi) {
    json row = json::array();
    for (size_t c = 0; c < p; ++c) row.push_back(gamma[gi * p + c]);
    gamma_rows.push_back(row);
  }
  const json sidecar = {{"config", config},
                        {"gamma", gamma_rows},
                        {"group_labels_start_at", 1},
                        {"rows", m}};

  const std::string sidecar_path =
      args.sidecar.empty() ? default_sidecar_path(args.output) : args.sidecar;
  if (!write_file(args.output, csv)) {
    return fail(kExitIo, "cannot write " + args.output);
  }
  if (!write_file(sidecar_path, sidecar.dump(2) + "\n")) {
    return fail(kExitIo, "cannot write " + sidecar_path);
  }
  return kExitOk;
}

struct FitArgs {
  std::string data_path;
  std::string spec_path;
  std::string output;
  std::string init_path;
};

int run_fit(const FitArgs& args) {
  const auto csv_text = read_file(args.data_path);
  if (!csv_text) return fail(kExitIo, "cannot read " + args.data_path);
  const auto spec_text = read_file(args.spec_path);
  if (!spec_text) return fail(kExitIo, "cannot read " + args.spec_path);

  std::string error;
  const auto table = parse_dataset_csv(*csv_text, &error);
  if (!table) return fail(kExitConfig, args.data_path + ": " + error);

  const json spec = json::parse(*spec_text, nullptr, false);
  if (spec.is_discarded() || !spec.is_object()) {
    return fail(kExitConfig, "model spec is not valid JSON");
  }
  if (!spec.contains("fixed") || !spec["fixed"].is_array() ||
      spec["fixed"].empty()) {
    return fail(kExitConfig, "missing required key: fixed");
  }
  if (!spec.contains("random") || !spec["random"].is_array()) {
    return fail(kExitConfig, "missing required key: random");
  }

  std::vector<int> fixed_cols, random_cols;
  for (const auto& name : spec["fixed"]) {
    const int c = column_index(*table, name.get<std::string>());
    if (c < 0) {
      return fail(kExitConfig,
                  "fixed column not in CSV: " + name.get<std::string>());
    }
    fixed_cols.push_back(c);
  }
  for (const auto& name : spec["random"]) {
    const int c = column_index(*table, name.get<std::string>());
    if (c < 0) {
      return fail(kExitConfig,
                  "random column not in CSV: " + name.get<std::string>());
    }
    random_cols.push_back(c);
  }

  json constraints = json::array();
  if (spec.contains("constrained")) {
    if (!spec["constrained"].is_array()) {
      return fail(kExitConfig, "constrained must be an array");
    }
    for (const auto& c : spec["constrained"]) {
      if (!c.contains("column") || !c.contains("sign")) {
        return fail(kExitConfig, "constrained entries need column and sign");
      }
      const std::string zname = c.at("column").get<std::string>();
      std::string bname = zname;  // default: same-named fixed column
      if (c.contains("coefficient")) {
        bname = c.at("coefficient").get<std::string>();
      }
      int z_idx = -1;
      for (std::size_t j = 0; j < random_cols.size(); ++j) {
        if (spec["random"][j].get<std::string>() == zname) {
          z_idx = static_cast<int>(j);
        }
      }
      if (z_idx < 0) {
        return fail(kExitConfig, "constrained column not in random: " + zname);
      }
      int b_idx = -1;
      for (std::size_t i = 0; i < fixed_cols.size(); ++i) {
        if (spec["fixed"][i].get<std::string>() == bname) {
          b_idx = static_cast<int>(i);
        }
      }
      if (b_idx < 0) {
        return fail(kExitConfig,
                    "constraint coefficient not in fixed: " + bname);
      }
      constraints.push_back({{"z_column", z_idx},
                             {"beta_index", b_idx},
                             {"sign", c.at("sign")}});
    }
  }

  json options = {{"constraints", constraints}};
  if (spec.contains("optimizer")) options["optimizer"] = spec["optimizer"];
  if (spec.contains("restarts")) options["restarts"] = spec["restarts"];
  if (!args.init_path.empty()) {
    const auto init_text = read_file(args.init_path);
    if (!init_text) return fail(kExitIo, "cannot read " + args.init_path);
    const json init = json::parse(*init_text, nullptr, false);
    if (init.is_discarded() || !init.contains("beta") ||
        !init.contains("sigma2") || !init.contains("varsigma")) {
      return fail(kExitConfig,
                  "init file must carry beta, sigma2 and varsigma");
    }
    options["init"] = {{"beta", init["beta"]},
                       {"sigma2", init["sigma2"]},
                       {"varsigma", init["varsigma"]}};
  }

  // Flatten the table into the C layout; group labels become dense
  // integers in first-appearance order.
  const std::size_t m = table->y.size();
  const std::size_t k = fixed_cols.size();
  const std::size_t p = random_cols.size();
  std::vector<double> x(m * k), z(m * p);
  std::vector<std::int64_t> group(m);
  std::map<std::string, std::int64_t> label_map;
  for (std::size_t r = 0; r < m; ++r) {
    auto [it, fresh] = label_map.try_emplace(
        table->group[r], static_cast<std::int64_t>(label_map.size()) + 1);
    group[r] = it->second;
    for (std::size_t i = 0; i < k; ++i) {
      x[r * k + i] = table->values[r][fixed_cols[i]];
    }
    for (std::size_t j = 0; j < p; ++j) {
      z[r * p + j] = table->values[r][random_cols[j]];
    }
  }

  LibString result;
  const int status =
      dtn_fit(table->y.data(), x.data(), z.data(), group.data(), m, k, p,
              options.dump().c_str(), &result.ptr);
  if (status != DTN_OK && status != DTN_ERR_NONCONVERGED) {
    return fail_status(status);
  }

  const int emit_status = emit(args.output, result.str());
  if (emit_status != kExitOk) return emit_status;
  if (status == DTN_ERR_NONCONVERGED) {
    std::cerr << "warning: optimizer did not converge\n";
    return kExitNonConverged;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly truncated Normal toolkit"};
  app.require_subcommand(1);

  DistArgs dist;
  CLI::App* dist_cmd =
      app.add_subcommand("dist", "evaluate pdf/cdf/mean/variance");
  dist_cmd->add_option("--mu", dist.mu, "location")->required();
  dist_cmd->add_option("--eta", dist.eta, "scale (> 0)")->required();
  dist_cmd->add_option("--rho", dist.rho, "half-width in scale units (> 0)")
      ->required();
  dist_cmd->add_option("--at", dist.at, "query points (repeatable)")
      ->required()
      ->expected(-1);
  dist_cmd->add_option("--output", dist.output, "output CSV (default stdout)");

  SampleArgs sample;
  CLI::App* sample_cmd = app.add_subcommand("sample", "draw exact samples");
  sample_cmd->add_option("--mu", sample.mu, "location")->required();
  sample_cmd->add_option("--eta", sample.eta, "scale (> 0)")->required();
  sample_cmd->add_option("--rho", sample.rho, "half-width (> 0)")->required();
  sample_cmd->add_option("--count", sample.count, "number of draws")
      ->required();
  sample_cmd->add_option("--seed", sample.seed, "stream seed")->required();
  sample_cmd->add_option("--output", sample.output,
                         "one sample per line (default stdout)");

  CltArgs clt;
  CLI::App* clt_cmd =
      app.add_subcommand("clt", "run a CLT convergence experiment");
  clt_cmd->add_option("--config", clt.config_path, "JSON config")->required();
  clt_cmd
      ->add_option("--output", clt.output,
                   "output base path (.json, .csv, _long.csv)")
      ->required();
  clt_cmd->add_option("--threads", clt.threads,
                      "worker threads (does not change results)");
  clt_cmd->add_option("--seed", clt.seed, "override the config seed");

  SimulateArgs sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "simulate a mixed-model dataset");
  sim_cmd->add_option("--config", sim.config_path, "JSON config")->required();
  sim_cmd->add_option("--output", sim.output, "dataset CSV path")->required();
  sim_cmd->add_option("--sidecar", sim.sidecar,
                      "truth JSON path (default <output>.truth.json)");
  sim_cmd->add_option("--seed", sim.seed, "override the config seed");

  FitArgs fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "fit the constrained mixed-effects model");
  fit_cmd->add_option("--data", fit.data_path, "dataset CSV")->required();
  fit_cmd->add_option("--spec", fit.spec_path, "model spec JSON")->required();
  fit_cmd->add_option("--output", fit.output, "fit JSON (default stdout)");
  fit_cmd->add_option("--init", fit.init_path,
                      "initialize from a previous fit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (dist_cmd->parsed()) return run_dist(dist);
  if (sample_cmd->parsed()) return run_sample(sample);
  if (clt_cmd->parsed()) return run_clt(clt);
  if (sim_cmd->parsed()) return run_simulate(sim);
  if (fit_cmd->parsed()) return run_fit(fit);
  return kExitConfig;
}
