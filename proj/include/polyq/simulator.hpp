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
 * Dense statevector evaluation of circuits, exact outcome distributions and
 * seeded shot sampling.
 *
 * Basis index b is read as a bitstring whose leftmost character is qubit 0,
 * i.e. qubit q is bit (N - 1 - q) of b.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyq/circuit.hpp"
#include "polyq/unitary.hpp"

namespace polyq {

inline constexpr std::size_t kMaxQubits = 20;

struct StateVector {
  std::size_t width = 0;
  std::vector<Complex> amplitudes;
};

struct Distribution {
  std::size_t width = 0;
  std::vector<double> probabilities;

  double probability(std::string_view bits) const;
};

struct ShotCounts {
  std::size_t width = 0;
  std::size_t shots = 0;
  std::vector<std::uint64_t> counts;  // indexed by basis index

  std::uint64_t count(std::string_view bits) const;
};

std::string bitstring(std::size_t index, std::size_t width);
/// Inverse of bitstring(); throws on characters other than '0'/'1'.
std::size_t basis_index(std::string_view bits);

/// Applies every gate in order to |0...0>. Accepts the extended tags
/// (H, CNOT, ZZ) as well as the core set.
StateVector statevector(const BoundCircuit& circuit);
Distribution distribution(const BoundCircuit& circuit);

/// Inverse-CDF sampling of n shots; deterministic for a given seed.
ShotCounts sample(const Distribution& dist, std::size_t shots, std::uint64_t seed);
ShotCounts sample(const BoundCircuit& circuit, std::size_t shots, std::uint64_t seed);

double total_variation(const Distribution& a, const Distribution& b);

/// Evaluates a symbolic circuit at (inputs, params) into `state`, reusing its
/// storage. Equivalent to statevector(bind_circuit(circuit, inputs, params)) without
/// materializing the bound circuit; arities are not rechecked.
void simulate_into(const Circuit& circuit, std::span<const double> inputs,
                   std::span<const double> params, std::vector<Complex>& state);

/// |amplitude|^2 of `state` into `probs`.
void probabilities_into(std::span<const Complex> state, std::vector<double>& probs);

}  // namespace polyq
