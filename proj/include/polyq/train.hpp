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
 * Parameter optimization and evaluation.
 *
 * Exact-mode training pairs with a BFGS quasi-Newton method on central
 * finite-difference gradients; sampled-mode training pairs with a
 * derivative-free linear-model trust-region method. Both record the loss of
 * every visited iterate and return the best one.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyq/data.hpp"
#include "polyq/model.hpp"

namespace polyq {

using Objective = std::function<double(std::span<const double>)>;

/// Central differences: (f(x + h e_i) - f(x - h e_i)) / 2h.
std::vector<double> finite_diff_gradient(const Objective& f, std::span<const double> x, double h);

struct MinimizeResult {
  std::vector<double> x;      // best visited point
  double value = 0.0;         // f(x)
  std::vector<double> trace;  // objective at each iterate
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

struct QuasiNewtonOptions {
  double tolerance = 1e-6;  // gradient-norm stopping threshold
  std::size_t max_iters = 200;
  double fd_step = 1e-4;
};

/// BFGS with an inverse-Hessian update and Armijo backtracking. The trace
/// holds f(x0) followed by one entry per accepted step.
MinimizeResult minimize_quasi_newton(const Objective& f, std::span<const double> x0,
                                     const QuasiNewtonOptions& options = {});

struct DerivativeFreeOptions {
  double initial_step = 0.5;   // starting trust radius
  double final_step = 1e-4;    // stop once the radius falls below this
  std::size_t max_evals = 500;
  std::uint64_t seed = 0;      // orientation of the initial simplex
};

/// Linear-interpolation trust-region method over p+1 points. Every
/// evaluation counts as one iteration and appends to the trace.
MinimizeResult minimize_derivative_free(const Objective& f, std::span<const double> x0,
                                        const DerivativeFreeOptions& options = {});

class ShotSchedule {
 public:
  static constexpr std::size_t kForever = std::numeric_limits<std::size_t>::max();

  ShotSchedule() = default;
  /// (threshold, shots): iteration i uses the first entry with i < threshold.
  explicit ShotSchedule(std::vector<std::pair<std::size_t, std::size_t>> steps);

  /// (20, 250), (50, 500), (forever, 750).
  static ShotSchedule standard();

  std::size_t shots_at(std::size_t iteration) const;
  const std::vector<std::pair<std::size_t, std::size_t>>& steps() const { return steps_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> steps_;
};

enum class OptimizerKind { quasi_newton, derivative_free };

OptimizerKind parse_optimizer(std::string_view name);
std::string_view optimizer_name(OptimizerKind kind);

struct TrainOptions {
  EvalMode mode = EvalMode::exact;
  OptimizerKind optimizer = OptimizerKind::quasi_newton;
  ShotSchedule schedule = ShotSchedule::standard();
  std::size_t max_iters = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  double fd_step = 1e-4;
  double initial_step = 0.5;
  double final_step = 1e-4;
};

struct TrainReport {
  std::vector<double> loss_trace;
  std::vector<std::size_t> shots_trace;  // per trace entry; 0 in exact mode
  std::vector<double> initial_theta;
  std::vector<double> best_theta;
  double best_loss = 0.0;
  std::size_t best_iteration = 0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::size_t total_shots = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// One training trajectory from theta0 ~ U(-pi, pi]^p drawn with `seed`.
/// spec.theta is ignored. The full training set is the batch.
TrainReport train(const ModelSpec& spec, const Dataset& train_set, const TrainOptions& options);

struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<std::size_t> counts;  // row = actual, column = predicted

  explicit ConfusionMatrix(std::size_t k = 0) : classes(k), counts(k * k, 0) {}
  std::size_t& at(std::size_t actual, std::size_t predicted) { return counts[actual * classes + predicted]; }
  std::size_t at(std::size_t actual, std::size_t predicted) const { return counts[actual * classes + predicted]; }
  std::size_t total() const;
  double accuracy() const;
};

struct EvalResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<std::size_t> predictions;
};

EvalResult evaluate(const ModelSpec& spec, const Dataset& test_set, const Readout& readout = {});

}  // namespace polyq
