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

#include "polyq/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "polyq/error.hpp"

namespace polyq {

void EncoderStats::validate() const {
  if (mean.size() != std.size()) throw Error("encoder stats: mean and std lengths differ");
  for (std::size_t i = 0; i < std.size(); ++i) {
    if (!(std[i] > 0.0) || !std::isfinite(std[i]) || !std::isfinite(mean[i])) {
      throw Error("encoder stats: feature " + std::to_string(i) + " has invalid std");
    }
  }
}

EncoderMode parse_encoder_mode(std::string_view name) {
  if (name == "standardize") return EncoderMode::standardize;
  if (name == "identity") return EncoderMode::identity;
  throw Error("unknown encoder mode '" + std::string(name) + "' (expected standardize or identity)");
}

std::string_view encoder_mode_name(EncoderMode mode) {
  return mode == EncoderMode::identity ? "identity" : "standardize";
}

double EncoderConfig::bound() const { return (1.0 - alpha / 2.0) * std::numbers::pi; }

void EncoderConfig::validate() const {
  if (mode == EncoderMode::identity) return;
  if (!(alpha > 0.0 && alpha < 2.0)) throw Error("encoder alpha must lie in (0, 2)");
  if (!(q > 0.0) || !std::isfinite(q)) throw Error("encoder quantile q must be positive");
}

EncoderStats fit(std::span<const std::vector<double>> rows) {
  if (rows.size() < 2) throw Error("encoder fit needs at least 2 samples");
  const std::size_t d = rows.front().size();
  EncoderStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (const auto& r : rows) {
    if (r.size() != d) throw Error("encoder fit: rows have different lengths");
    for (std::size_t i = 0; i < d; ++i) s.mean[i] += r[i];
  }
  const auto n = static_cast<double>(rows.size());
  for (double& m : s.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) s.std[i] += (r[i] - s.mean[i]) * (r[i] - s.mean[i]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    s.std[i] = std::sqrt(s.std[i] / n);
    if (!(s.std[i] > 0.0)) throw Error("feature " + std::to_string(i) + " is constant");
  }
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double quantile_from_epsilon(double epsilon, std::size_t d) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (d == 0) throw Error("dimension must be at least 1");
  return normal_quantile(1.0 - std::pow(epsilon, 1.0 / static_cast<double>(d)) / 2.0);
}

std::vector<double> encode(std::span<const double> x, const EncoderStats& stats,
                           const EncoderConfig& config) {
  if (config.mode == EncoderMode::identity) return {x.begin(), x.end()};
  if (x.size() != stats.dim()) {
    throw Error("feature vector has " + std::to_string(x.size()) + " entries, encoder expects " +
                std::to_string(stats.dim()));
  }
  const double bound = config.bound();
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - stats.mean[i]) / stats.std[i];
    w[i] = std::clamp(bound * (z / config.q), -bound, bound);
  }
  return w;
}

}  // namespace polyq
