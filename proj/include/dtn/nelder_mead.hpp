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

#ifndef DTN_NELDER_MEAD_HPP_
#define DTN_NELDER_MEAD_HPP_

#include <functional>
#include <vector>

namespace dtn {

enum class Termination { tolerance_met, max_iter, degenerate_simplex };

struct NelderMeadOptions {
  double diameter_tol = 1e-8;  // max-norm spread of the simplex vertices
  double value_tol = 1e-10;    // worst-best objective spread
  int max_iter = 50000;
  double relative_step = 0.05;    // initial simplex step for nonzero coords
  double absolute_step = 2.5e-4;  // and for zero coords
  bool record_trace = false;      // keep best value per iteration
};

struct OptimizerReport {
  std::vector<double> best_point;
  double best_value = 0.0;
  int iterations = 0;
  bool converged = false;
  Termination termination = Termination::max_iter;
  double final_value_spread = 0.0;  // near-flat directions show up here
  double final_diameter = 0.0;
  std::vector<double> trace;  // filled only when record_trace is set
};

/// Downhill simplex search (Nelder & Mead 1965) with the standard
/// reflection/expansion/contraction/shrink coefficients. Deterministic
/// given (objective, start, options). Non-finite objective values during
/// the search are treated as +inf (point rejected); a non-finite value at
/// the start point throws DomainError.
OptimizerReport nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, const NelderMeadOptions& options = {});

}  // namespace dtn

#endif  // DTN_NELDER_MEAD_HPP_
