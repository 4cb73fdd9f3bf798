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
 * Pulse-reducing peephole passes over {sx, Rz, Cz} circuits.
 *
 * Each rule is sound up to global phase and measurement: the outcome
 * distribution of every binding is unchanged. Rules never touch symbolic
 * angles except to delete a whole gate.
 */

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyq/circuit.hpp"

namespace polyq {

/// Rz gates whose constant angle is this close to 0 mod 2pi are deleted.
inline constexpr double kZeroAngleTolerance = 1e-12;

struct RewriteReport {
  std::map<std::string, std::size_t> applications;  // rule name -> count
  PulseCount before;
  PulseCount after;
  std::size_t rounds = 0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// Individual rules. When `applied` is non-null it receives the number of
// rewrites performed. Every rule runs to its fixpoint.

/// Rz on a qubit that has seen no gate, and Cz where either operand is still
/// in |0>, are deleted.
Circuit remove_initial(const Circuit& circuit, std::size_t* applied = nullptr);
/// Rz on a qubit with no later gate, and Cz with no later gate on either
/// operand, are deleted.
Circuit remove_final(const Circuit& circuit, std::size_t* applied = nullptr);
/// Cz pairs on the same qubits with no gate between them on either qubit.
Circuit cancel_double_cz(const Circuit& circuit, std::size_t* applied = nullptr);
/// Adjacent constant Rz pairs on a qubit merge; the sum is wrapped to (-pi, pi].
Circuit merge_rz(const Circuit& circuit, std::size_t* applied = nullptr);
/// Constant Rz gates with angle ≡ 0 (mod 2pi) within kZeroAngleTolerance.
Circuit remove_zero_rz(const Circuit& circuit, std::size_t* applied = nullptr);

/// Rewrites every constant single-qubit segment between Cz boundaries into
/// its pulse-minimal canonical form (sx Rz sx before the first Cz,
/// Rz sx Rz sx afterwards), pushing leftover Z rotations through the
/// following Cz. Segments already canonical are kept verbatim; symbolic
/// segments are kept and reported when longer than the canonical form.
Circuit resynthesize(const Circuit& circuit, RewriteReport* report = nullptr);

struct OptimizeResult {
  Circuit circuit;
  RewriteReport report;
};

/// All rules followed by resynthesis, repeated until the circuit stops
/// changing. Idempotent.
OptimizeResult optimize(const Circuit& circuit);

/// Describes the first per-qubit segment that exceeds the maximal form
/// (first segment: subsequence of sx Rz sx; later ones: at most 2 sx and
/// 2 Rz), or nullopt when the circuit complies.
std::optional<std::string> maximal_form_violation(const Circuit& circuit);

struct EquivalenceResult {
  bool equivalent = true;
  std::size_t trials = 0;
  double max_tv = 0.0;
  // Binding that exposed the disagreement.
  std::vector<double> inputs;
  std::vector<double> params;

  explicit operator bool() const { return equivalent; }
};

/// Compares outcome distributions of two circuits with the same signature
/// over random (omega, theta) bindings drawn from (-pi, pi].
EquivalenceResult verify_equivalence(const Circuit& a, const Circuit& b, std::size_t trials,
                                     std::uint64_t seed, double tolerance = 1e-9);

}  // namespace polyq
