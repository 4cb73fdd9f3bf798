// Copyright 2026 The polyq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file
 * The `polyq` command-line tool. Commands are exposed as a function so the
 * test suite can drive them in-process.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyq/model.hpp"

namespace polyq {

struct BoundaryPoint {
  double x0 = 0.0;
  double x1 = 0.0;
  std::size_t label = 0;  // class index in the model's class map
};

/// Exact-mode predictions at the cell centers of an nx-by-ny grid over raw
/// feature space; x0 varies fastest. Requires a 2-input model. Unset ranges
/// default to mean +/- q std (standardize) or [-pi, pi] (identity).
std::vector<BoundaryPoint> decision_boundary(const ModelSpec& model, std::size_t nx, std::size_t ny,
                                             std::optional<std::pair<double, double>> x_range = {},
                                             std::optional<std::pair<double, double>> y_range = {});

/// Runs one command line. Returns the process exit status; errors go to `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace polyq
