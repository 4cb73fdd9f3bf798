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
 * Parametric circuit representation over {sx, Rz, Cz}.
 *
 * Rz angles are either constants or slots: Input(k) is the k-th encoded
 * feature angle (omega_k) and Param(k) the k-th trainable angle (theta_k).
 * Measurement of every qubit is implicit at the end of the circuit.
 *
 * The extended tags H, CNOT and ZZ exist only so that gate-set translation
 * results can be represented, serialized and simulated.
 */

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polyq {

struct Const {
  double radians = 0.0;
  friend bool operator==(const Const&, const Const&) = default;
};
struct Input {
  std::size_t index = 0;
  friend bool operator==(const Input&, const Input&) = default;
};
struct Param {
  std::size_t index = 0;
  friend bool operator==(const Param&, const Param&) = default;
};

using AngleExpr = std::variant<Const, Input, Param>;

inline bool is_const(const AngleExpr& a) { return std::holds_alternative<Const>(a); }

/// "w<k>", "t<k>" or the shortest decimal that round-trips the constant.
std::string to_string(const AngleExpr& a);

enum class GateKind : std::uint8_t { sx, rz, cz, h, cnot, zz };

std::string_view gate_name(GateKind kind);

inline bool is_two_qubit(GateKind kind) {
  return kind == GateKind::cz || kind == GateKind::cnot || kind == GateKind::zz;
}

/// The universal set the passes and presets are written in.
inline bool is_core(GateKind kind) {
  return kind == GateKind::sx || kind == GateKind::rz || kind == GateKind::cz;
}

struct Gate {
  GateKind kind = GateKind::sx;
  std::size_t q0 = 0;
  std::size_t q1 = 0;  // second operand; CNOT target
  AngleExpr angle = Const{};

  static Gate sx(std::size_t q) { return {GateKind::sx, q, q, Const{}}; }
  static Gate rz(std::size_t q, AngleExpr angle) { return {GateKind::rz, q, q, angle}; }
  static Gate rz(std::size_t q, double radians) { return rz(q, Const{radians}); }
  /// Operands are stored low index first; Cz is symmetric.
  static Gate cz(std::size_t a, std::size_t b);
  static Gate h(std::size_t q) { return {GateKind::h, q, q, Const{}}; }
  static Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::cnot, control, target, Const{}};
  }
  static Gate zz(std::size_t a, std::size_t b);

  bool two_qubit() const { return is_two_qubit(kind); }
  bool acts_on(std::size_t q) const { return q0 == q || (two_qubit() && q1 == q); }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct PulseCount {
  std::size_t one_qubit = 0;
  std::size_t two_qubit = 0;
  friend auto operator<=>(const PulseCount&, const PulseCount&) = default;
};

class Circuit {
 public:
  /// Arity is derived as 1 + the largest slot index in use.
  Circuit(std::size_t width, std::vector<Gate> gates);
  /// Explicit arity, which may exceed the slots in use (rewrites can delete
  /// a slot's only occurrence without changing the circuit's signature).
  Circuit(std::size_t width, std::vector<Gate> gates, std::size_t num_inputs,
          std::size_t num_params);

  std::size_t width() const { return width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_params() const { return num_params_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  bool is_symbolic() const;
  bool is_core() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t width_;
  std::vector<Gate> gates_;
  std::size_t num_inputs_ = 0;
  std::size_t num_params_ = 0;
};

struct BoundGate {
  GateKind kind = GateKind::sx;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double angle = 0.0;
  friend bool operator==(const BoundGate&, const BoundGate&) = default;
};

/// A circuit with every angle resolved to a number.
struct BoundCircuit {
  std::size_t width = 1;
  std::vector<BoundGate> gates;
  friend bool operator==(const BoundCircuit&, const BoundCircuit&) = default;
};

/// The phi-box: [Sx(q), Rz(q, angle), Sx(q)].
std::vector<Gate> compact_gate(std::size_t qubit, AngleExpr angle);

BoundCircuit bind_circuit(const Circuit& circuit, std::span<const double> inputs,
                  std::span<const double> params);

/// Lift a bound circuit back into the symbolic IR (all angles Const).
Circuit to_circuit(const BoundCircuit& bound);

PulseCount pulse_count(const Circuit& circuit);
PulseCount pulse_count(const BoundCircuit& circuit);

/// Experiment circuits: "iris2q", "xor2q", "skin3q", "synth2q".
Circuit preset(std::string_view name);
std::vector<std::string> preset_names();

/// Text format: a `QUBITS <N>` header, then one gate per line
/// (`SX q`, `RZ q <angle|w<k>|t<k>>`, `CZ a b`, `H q`, `CNOT c t`, `ZZ a b`).
/// `INPUTS d` / `PARAMS p` header lines are emitted only when the arity
/// exceeds the slots in use. Blank lines and `#` comments are ignored.
std::string to_text(const Circuit& circuit);
std::string to_text(const BoundCircuit& circuit);
Circuit parse_circuit(std::string_view text);

}  // namespace polyq
