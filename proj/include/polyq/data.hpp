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
 * Datasets: CSV ingestion, stratified splitting, and the generators used by
 * the bundled experiments.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

struct Dataset {
  std::vector<std::vector<double>> features;  // n rows of d values
  std::vector<std::size_t> labels;            // class indices
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  std::string metadata;  // JSON text describing how the data was produced; may be empty

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.empty() ? feature_names.size() : features.front().size(); }
  std::size_t num_classes() const { return class_names.size(); }
  std::vector<std::size_t> class_counts() const;

  /// Rows at the given indices, in that order.
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Relabels to the given class-name order; every present class must appear.
  Dataset reorder_classes(std::span<const std::string> order) const;

  void validate() const;
};

/// Reads a headered CSV. With no feature columns given, every column other
/// than `label_column` is a feature. Class indices follow first appearance.
Dataset load_csv(const std::filesystem::path& path, std::span<const std::string> feature_columns = {},
                 const std::string& label_column = "label");
Dataset parse_csv(const std::string& text, std::span<const std::string> feature_columns = {},
                  const std::string& label_column = "label");

/// Header row of feature names plus `label`, then one row per sample.
std::string to_csv(const Dataset& ds);

/// Per-class shuffle and split; each class contributes round(n_k * f) test rows.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

/// n / K rows drawn uniformly from each class.
Dataset subsample_balanced(const Dataset& ds, std::size_t n, std::uint64_t seed);

/// Four isotropic Gaussian clusters: (a,0) and (-a,0) are class 0, (0,a)
/// and (0,-a) class 1. `per_center` points each.
Dataset gen_gaussian_xor(std::size_t per_center, double sigma, double a, std::uint64_t seed);

/// Posterior-argmax class for the XOR mixture: 0 iff |x1| >= |x2|.
std::size_t bayes_xor(std::span<const double> x);

/// Exact accuracy of bayes_xor on the mixture: p^2 + (1-p)^2 with
/// p = Phi(a / (sqrt2 sigma)).
double xor_bayes_accuracy(double sigma, double a);
/// Sigma at which xor_bayes_accuracy equals `accuracy` (in (1/2, 1)).
double xor_sigma_for_bayes_accuracy(double accuracy, double a);

/// Bayes accuracy 29/30 at unit center distance.
inline constexpr double kXorBayesAccuracy = 1.0 - 1.0 / 30.0;

inline constexpr std::uint64_t kSynthetic4Seed = 14;

/// Two-dimensional four-class mixture: anisotropic Gaussian clusters with
/// means drawn in [-2, 2]^2 (pairwise at least 1.2 apart), standard
/// deviations in [0.2, 0.6] along a random orientation, equal class weights
/// and 1% of labels flipped to a random other class. All drawn parameters
/// are recorded in the dataset metadata.
Dataset gen_synthetic4(std::size_t n, std::uint64_t seed = kSynthetic4Seed);

}  // namespace polyq
