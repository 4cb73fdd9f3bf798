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
 * Experiment configuration and the restart protocol: load or generate data,
 * split, fit the encoder on the training part, train from many random
 * starts, keep the lowest-training-loss model and evaluate it.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyq/data.hpp"
#include "polyq/model.hpp"
#include "polyq/train.hpp"

namespace polyq {

struct DataSource {
  std::string source = "csv";  // csv | xor | synthetic4
  // csv
  std::filesystem::path path;
  std::vector<std::string> features;  // empty: every non-label column
  std::string label_column = "label";
  // xor
  std::size_t per_center = 20;
  double scale = 1.0;
  double sigma = 0.0;  // 0: calibrated from bayes_accuracy
  double bayes_accuracy = kXorBayesAccuracy;
  // synthetic4
  std::size_t n = 5000;
  std::uint64_t seed = 1;
  // optional balanced subsample (csv)
  std::optional<std::size_t> subsample;
  std::uint64_t subsample_seed = 1;

  Dataset load() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DataSource data;
  /// When set, the test set is generated independently;
  /// otherwise it is a stratified split of `data`.
  std::optional<DataSource> test_data;
  double test_fraction = 0.4;
  std::uint64_t split_seed = 1;

  std::string preset;
  std::filesystem::path circuit_file;
  std::vector<std::pair<std::string, std::string>> class_map;
  EncoderConfig encoder;
  /// When set, q is derived from it and the feature dimension at fit time.
  std::optional<double> encoder_epsilon;
  bool drop_outliers = false;  // drop training rows with any |z| > q before training

  TrainOptions training;
  std::size_t restarts = 20;

  Readout evaluation;
  std::size_t evaluation_runs = 1;  // sampled mode: seeds mix_seed(seed, run)

  std::filesystem::path output_dir;

  /// Relative paths resolve against `base_dir`.
  static ExperimentConfig from_json(const std::string& text, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);

  Circuit circuit() const;
  /// Checks that need no data: restarts, pairing of mode and optimizer,
  /// class-map width against the circuit.
  void validate() const;
};

struct PreparedData {
  Dataset train;
  Dataset test;
};

/// Loads or generates the data, orders classes as in the class map and
/// checks the feature dimension against the circuit.
PreparedData prepare_data(const ExperimentConfig& config);

/// Circuit, class map and encoder fitted on `train`; theta left empty.
ModelSpec untrained_model(const ExperimentConfig& config, const Dataset& train);

struct RestartOutcome {
  TrainReport report;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct ExperimentResult {
  ModelSpec model;  // best restart
  std::size_t best_restart = 0;
  std::vector<RestartOutcome> restarts;
  EvalResult test;                      // best model, configured readout, first run
  std::vector<double> test_accuracies;  // one per evaluation run
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  double mean_test_accuracy() const;
  double median_restart_accuracy() const;
};

/// Restart r trains with seed mix_seed(training.seed, r). Up to `jobs`
/// restarts run concurrently; results do not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data, std::size_t jobs = 1,
                                std::ostream* log = nullptr);

std::string report_json(const ExperimentConfig& config, const ExperimentResult& result);
/// iteration,loss,shots rows of the best restart.
std::string loss_trace_csv(const TrainReport& report);
std::string confusion_text(const ConfusionMatrix& m, const std::vector<std::string>& labels);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// model.json, loss_trace.csv and report.json in `dir`.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir);

}  // namespace polyq
