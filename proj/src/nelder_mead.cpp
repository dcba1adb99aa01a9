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

#include "dtn/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dtn/errors.hpp"

namespace dtn {

namespace {

constexpr double kAlpha = 1.0;  // reflection
constexpr double kGamma = 2.0;  // expansion
constexpr double kBeta = 0.5;   // contraction
constexpr double kDelta = 0.5;  // shrink

double guarded(const std::function<double(const std::vector<double>&)>& f,
               const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

OptimizerReport nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) throw DomainError("nelder_mead: start point is empty");
  if (!std::isfinite(objective(start))) {
    throw DomainError("nelder_mead: objective not finite at start");
  }

  std::vector<std::vector<double>> verts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    double& coord = verts[i + 1][i];
    coord += coord != 0.0 ? options.relative_step * std::fabs(coord)
                          : options.absolute_step;
  }
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = guarded(objective, verts[i]);

  std::vector<std::size_t> order(n + 1);
  OptimizerReport report;
  if (options.record_trace) report.trace.reserve(64);

  auto sort_order = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return vals[a] < vals[b];
                     });
  };

  int iter = 0;
  Termination term = Termination::max_iter;
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  while (true) {
    sort_order();
    const std::size_t best = order[0];
    const std::size_t worst = order[n];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter =
            std::max(diameter, std::fabs(verts[order[i]][j] - verts[best][j]));
      }
    }
    const double spread = vals[worst] - vals[best];
    report.final_diameter = diameter;
    report.final_value_spread = spread;
    if (options.record_trace) report.trace.push_back(vals[best]);

    if (diameter < options.diameter_tol || spread < options.value_tol) {
      term = Termination::tolerance_met;
      break;
    }
    if (iter >= options.max_iter) {
      term = Termination::max_iter;
      break;
    }
    ++iter;

    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        if (i != worst) s += verts[i][j];
      }
      centroid[j] = s / static_cast<double>(n);
    }

    for (std::size_t j = 0; j < n; ++j) {
      xr[j] = centroid[j] + kAlpha * (centroid[j] - verts[worst][j]);
    }
    const double fr = guarded(objective, xr);

    if (fr < vals[best]) {
      for (std::size_t j = 0; j < n; ++j) {
        xe[j] = centroid[j] + kGamma * (xr[j] - centroid[j]);
      }
      const double fe = guarded(objective, xe);
      if (fe < fr) {
        verts[worst] = xe;
        vals[worst] = fe;
      } else {
        verts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[order[n - 1]]) {
      verts[worst] = xr;
      vals[worst] = fr;
      continue;
    }

    // Contraction, outside or inside depending on where the reflection fell.
    const bool outside = fr < vals[worst];
    const std::vector<double>& toward = outside ? xr : verts[worst];
    for (std::size_t j = 0; j < n; ++j) {
      xc[j] = centroid[j] + kBeta * (toward[j] - centroid[j]);
    }
    const double fc = guarded(objective, xc);
    if (fc < (outside ? fr : vals[worst])) {
      verts[worst] = xc;
      vals[worst] = fc;
      continue;
    }

    // Shrink toward the best vertex.
    bool moved = false;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double updated =
            verts[best][j] + kDelta * (verts[i][j] - verts[best][j]);
        if (updated != verts[i][j]) moved = true;
        verts[i][j] = updated;
      }
      vals[i] = guarded(objective, verts[i]);
    }
    if (!moved) {
      term = Termination::degenerate_simplex;
      sort_order();
      break;
    }
  }

  sort_order();
  report.best_point = verts[order[0]];
  report.best_value = vals[order[0]];
  report.iterations = iter;
  report.termination = term;
  report.converged = term == Termination::tolerance_met;
  return report;
}

}  // namespace dtn
