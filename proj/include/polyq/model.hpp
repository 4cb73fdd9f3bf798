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
 * Classifier readout: class-to-bitstring map, class probabilities from a
 * distribution or from shot counts, argmax prediction and the softmax loss
 *
 *   L(P, y) = -log( exp(P_y) / sum_k exp(P_k) ).
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyq/circuit.hpp"
#include "polyq/encoding.hpp"
#include "polyq/simulator.hpp"

namespace polyq {

class ClassMap {
 public:
  ClassMap() = default;
  /// (label, bitstring) pairs; the order fixes the class indices.
  explicit ClassMap(std::vector<std::pair<std::string, std::string>> entries);
  ClassMap(std::initializer_list<std::pair<std::string, std::string>> entries)
      : ClassMap(std::vector<std::pair<std::string, std::string>>(entries)) {}

  std::size_t size() const { return labels_.size(); }
  std::size_t width() const { return width_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& bitstrings() const { return bits_; }
  /// Basis index of each class's bitstring.
  const std::vector<std::size_t>& indices() const { return indices_; }

  friend bool operator==(const ClassMap&, const ClassMap&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> bits_;
  std::vector<std::size_t> indices_;
  std::size_t width_ = 0;
};

using ClassProbs = std::vector<double>;

ClassProbs class_probs(const Distribution& dist, const ClassMap& map);
ClassProbs class_probs(const ShotCounts& counts, const ClassMap& map);

/// Argmax; ties go to the earliest class.
std::size_t predict(std::span<const double> probs);

double loss_single(std::span<const double> probs, std::size_t y);

/// Pairwise (cascade) summation; the result does not depend on how the
/// terms were produced.
double pairwise_sum(std::span<const double> values);

enum class EvalMode { exact, sampled };

EvalMode parse_eval_mode(std::string_view name);
std::string_view eval_mode_name(EvalMode mode);

struct Readout {
  EvalMode mode = EvalMode::exact;
  std::size_t shots = 0;   // sampled mode only
  std::uint64_t seed = 0;  // sampled mode only; sample i uses mix_seed(seed, i)
};

struct ModelSpec {
  Circuit circuit{1, {}};
  ClassMap class_map;
  EncoderStats stats;
  EncoderConfig encoder;
  std::vector<double> theta;

  /// Cross-field consistency: map width vs circuit width, theta length vs
  /// circuit parameters, encoder dimension vs circuit inputs.
  void validate() const;

  std::string to_json() const;
  static ModelSpec from_json(const std::string& text);
};

/// A batch whose features are already encoded as circuit input angles.
/// Evaluation reuses per-instance scratch buffers, so one instance must not
/// be shared between threads.
class BatchEvaluator {
 public:
  BatchEvaluator(const ModelSpec& spec, std::span<const std::vector<double>> features,
                 std::span<const std::size_t> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_params() const { return circuit_.num_params(); }

  /// Class probabilities of sample i.
  ClassProbs probs(std::size_t i, std::span<const double> theta, const Readout& readout);
  /// Mean loss over the batch.
  double loss(std::span<const double> theta, const Readout& readout);

 private:
  Circuit circuit_;
  ClassMap map_;
  std::vector<std::vector<double>> angles_;
  std::vector<std::size_t> labels_;
  std::vector<Complex> state_;
  std::vector<double> dist_;
  std::vector<double> terms_;
};

/// Mean loss of `theta` over the batch (features are raw, encoded here).
double loss_batch(const ModelSpec& spec, std::span<const double> theta,
                  std::span<const std::vector<double>> features, std::span<const std::size_t> labels,
                  const Readout& readout);

}  // namespace polyq
