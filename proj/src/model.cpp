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

#include "polyq/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {

ClassMap::ClassMap(std::vector<std::pair<std::string, std::string>> entries) {
  if (entries.empty()) throw Error("class map is empty");
  width_ = entries.front().second.size();
  if (width_ == 0) throw Error("class map bitstrings must be non-empty");
  std::set<std::string> seen_labels, seen_bits;
  for (auto& [label, bits] : entries) {
    if (bits.size() != width_) throw Error("class map bitstrings have different lengths");
    if (!seen_labels.insert(label).second) throw Error("class map repeats label '" + label + "'");
    if (!seen_bits.insert(bits).second) throw Error("class map repeats bitstring " + bits);
    indices_.push_back(basis_index(bits));
    labels_.push_back(std::move(label));
    bits_.push_back(std::move(bits));
  }
}

ClassProbs class_probs(const Distribution& dist, const ClassMap& map) {
  if (dist.width != map.width()) throw Error("class map width does not match the distribution");
  ClassProbs p(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) p[k] = dist.probabilities[map.indices()[k]];
  return p;
}

ClassProbs class_probs(const ShotCounts& counts, const ClassMap& map) {
  if (counts.width != map.width()) throw Error("class map width does not match the shot counts");
  ClassProbs p(map.size());
  const auto n = static_cast<double>(counts.shots);
  for (std::size_t k = 0; k < map.size(); ++k) p[k] = static_cast<double>(counts.counts[map.indices()[k]]) / n;
  return p;
}

std::size_t predict(std::span<const double> probs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[best]) best = k;
  }
  return best;
}

double loss_single(std::span<const double> probs, std::size_t y) {
  if (y >= probs.size()) throw Error("class index out of range");
  const double m = *std::max_element(probs.begin(), probs.end());
  double s = 0.0;
  for (double p : probs) s += std::exp(p - m);
  return -(probs[y] - m) + std::log(s);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "exact") return EvalMode::exact;
  if (name == "sampled") return EvalMode::sampled;
  throw Error("unknown evaluation mode '" + std::string(name) + "' (expected exact or sampled)");
}

std::string_view eval_mode_name(EvalMode mode) { return mode == EvalMode::exact ? "exact" : "sampled"; }

void ModelSpec::validate() const {
  if (class_map.size() == 0) throw Error("model has no class map");
  if (class_map.width() != circuit.width()) {
    throw Error("class map bitstrings have length " + std::to_string(class_map.width()) +
                " but the circuit has " + std::to_string(circuit.width()) + " qubits");
  }
  if (!theta.empty() && theta.size() != circuit.num_params()) {
    throw Error("theta has " + std::to_string(theta.size()) + " entries, circuit expects " +
                std::to_string(circuit.num_params()));
  }
  encoder.validate();
  if (encoder.mode == EncoderMode::standardize) {
    stats.validate();
    if (stats.dim() != circuit.num_inputs()) {
      throw Error("encoder has dimension " + std::to_string(stats.dim()) + " but the circuit takes " +
                  std::to_string(circuit.num_inputs()) + " inputs");
    }
  }
}

std::string ModelSpec::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "polyq-model";
  j["version"] = 1;
  j["circuit"] = to_text(circuit);
  auto& cm = j["class_map"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < class_map.size(); ++k) {
    cm.push_back({class_map.labels()[k], class_map.bitstrings()[k]});
  }
  j["encoder"] = {{"mode", encoder_mode_name(encoder.mode)},
                  {"alpha", encoder.alpha},
                  {"q", encoder.q},
                  {"mean", stats.mean},
                  {"std", stats.std}};
  j["theta"] = theta;
  return j.dump(2);
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "polyq-model") throw Error("not a model file");
    ModelSpec m;
    m.circuit = parse_circuit(j.at("circuit").get<std::string>());
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& e : j.at("class_map")) entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    m.class_map = ClassMap(std::move(entries));
    const auto& enc = j.at("encoder");
    m.encoder.mode = parse_encoder_mode(enc.at("mode").get<std::string>());
    m.encoder.alpha = enc.at("alpha").get<double>();
    m.encoder.q = enc.at("q").get<double>();
    m.stats.mean = enc.at("mean").get<std::vector<double>>();
    m.stats.std = enc.at("std").get<std::vector<double>>();
    m.theta = j.at("theta").get<std::vector<double>>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

BatchEvaluator::BatchEvaluator(const ModelSpec& spec, std::span<const std::vector<double>> features,
                               std::span<const std::size_t> labels)
    : circuit_(spec.circuit), map_(spec.class_map), labels_(labels.begin(), labels.end()) {
  if (features.size() != labels.size()) throw Error("feature and label counts differ");
  if (features.empty()) throw Error("batch is empty");
  if (map_.width() != circuit_.width()) throw Error("class map width does not match the circuit");
  for (std::size_t y : labels_) {
    if (y >= map_.size()) throw Error("label outside the class map");
  }
  angles_.reserve(features.size());
  for (const auto& x : features) {
    angles_.push_back(encode(x, spec.stats, spec.encoder));
    if (angles_.back().size() != circuit_.num_inputs()) {
      throw Error("sample has " + std::to_string(angles_.back().size()) + " features, circuit takes " +
                  std::to_string(circuit_.num_inputs()) + " inputs");
    }
  }
  terms_.resize(labels_.size());
}

ClassProbs BatchEvaluator::probs(std::size_t i, std::span<const double> theta, const Readout& readout) {
  if (theta.size() != circuit_.num_params()) {
    throw Error("parameter vector length mismatch: expected " + std::to_string(circuit_.num_params()) +
                ", given " + std::to_string(theta.size()));
  }
  simulate_into(circuit_, angles_[i], theta, state_);
  probabilities_into(state_, dist_);
  ClassProbs p(map_.size());
  if (readout.mode == EvalMode::exact) {
    for (std::size_t k = 0; k < map_.size(); ++k) p[k] = dist_[map_.indices()[k]];
    return p;
  }
  const ShotCounts counts = sample(Distribution{circuit_.width(), dist_}, readout.shots, mix_seed(readout.seed, i));
  return class_probs(counts, map_);
}

double BatchEvaluator::loss(std::span<const double> theta, const Readout& readout) {
  for (std::size_t i = 0; i < labels_.size(); ++i) terms_[i] = loss_single(probs(i, theta, readout), labels_[i]);
  return pairwise_sum(terms_) / static_cast<double>(terms_.size());
}

double loss_batch(const ModelSpec& spec, std::span<const double> theta,
                  std::span<const std::vector<double>> features, std::span<const std::size_t> labels,
                  const Readout& readout) {
  BatchEvaluator batch(spec, features, labels);
  return batch.loss(theta, readout);
}

}  // namespace polyq
