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
 * Feature-to-angle encoding: per-feature standardization followed by a
 * linear rescale that keeps an angular gap of alpha*pi free on the circle.
 *
 *   omega_i = (1 - alpha/2) * (pi / q) * (x_i - mean_i) / std_i
 *
 * clamped to [-(1 - alpha/2) pi, (1 - alpha/2) pi].
 */

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace polyq {

struct EncoderStats {
  std::vector<double> mean;
  std::vector<double> std;  // population standard deviation, all > 0

  std::size_t dim() const { return mean.size(); }
  void validate() const;
};

enum class EncoderMode { standardize, identity };

EncoderMode parse_encoder_mode(std::string_view name);
std::string_view encoder_mode_name(EncoderMode mode);

struct EncoderConfig {
  EncoderMode mode = EncoderMode::standardize;
  double alpha = 0.1;  // angular gap, in units of pi
  double q = 3.0;      // z-score mapped to the edge of the range

  /// (1 - alpha/2) * pi.
  double bound() const;
  void validate() const;
};

/// Element-wise mean and population standard deviation of the rows.
EncoderStats fit(std::span<const std::vector<double>> rows);

double normal_cdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Phi^{-1}(1 - epsilon^{1/d} / 2).
double quantile_from_epsilon(double epsilon, std::size_t d);

/// Identity mode returns x unchanged and ignores `stats`.
std::vector<double> encode(std::span<const double> x, const EncoderStats& stats,
                           const EncoderConfig& config);

}  // namespace polyq
