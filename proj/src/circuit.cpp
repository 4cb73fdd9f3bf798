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

#include "polyq/circuit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "polyq/error.hpp"

namespace polyq {

namespace {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

struct Arity {
  std::size_t inputs = 0;
  std::size_t params = 0;
};

Arity used_arity(const std::vector<Gate>& gates) {
  Arity a;
  for (const Gate& g : gates) {
    if (g.kind != GateKind::rz) continue;
    if (const auto* in = std::get_if<Input>(&g.angle)) a.inputs = std::max(a.inputs, in->index + 1);
    if (const auto* p = std::get_if<Param>(&g.angle)) a.params = std::max(a.params, p->index + 1);
  }
  return a;
}

void validate(std::size_t width, const std::vector<Gate>& gates) {
  if (width == 0) throw Error("circuit width must be at least 1");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.q0 >= width || (g.two_qubit() && g.q1 >= width)) {
      throw Error("gate " + std::to_string(i) + " addresses a qubit outside width " +
                  std::to_string(width));
    }
    if (g.two_qubit() && g.q0 == g.q1) {
      throw Error("gate " + std::to_string(i) + " is a two-qubit gate on a single qubit");
    }
    if (const auto* c = std::get_if<Const>(&g.angle); c && !std::isfinite(c->radians)) {
      throw Error("gate " + std::to_string(i) + " has a non-finite angle");
    }
  }
}

}  // namespace

std::string to_string(const AngleExpr& a) {
  if (const auto* in = std::get_if<Input>(&a)) return "w" + std::to_string(in->index);
  if (const auto* p = std::get_if<Param>(&a)) return "t" + std::to_string(p->index);
  return format_double(std::get<Const>(a).radians);
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::sx: return "SX";
    case GateKind::rz: return "RZ";
    case GateKind::cz: return "CZ";
    case GateKind::h: return "H";
    case GateKind::cnot: return "CNOT";
    case GateKind::zz: return "ZZ";
  }
  return "?";
}

Gate Gate::cz(std::size_t a, std::size_t b) {
  return {GateKind::cz, std::min(a, b), std::max(a, b), Const{}};
}

Gate Gate::zz(std::size_t a, std::size_t b) {
  return {GateKind::zz, std::min(a, b), std::max(a, b), Const{}};
}

Circuit::Circuit(std::size_t width, std::vector<Gate> gates)
    : width_(width), gates_(std::move(gates)) {
  validate(width_, gates_);
  const Arity a = used_arity(gates_);
  num_inputs_ = a.inputs;
  num_params_ = a.params;
}

Circuit::Circuit(std::size_t width, std::vector<Gate> gates, std::size_t num_inputs,
                 std::size_t num_params)
    : width_(width), gates_(std::move(gates)), num_inputs_(num_inputs), num_params_(num_params) {
  validate(width_, gates_);
  const Arity a = used_arity(gates_);
  if (a.inputs > num_inputs_ || a.params > num_params_) {
    throw Error("declared arity (" + std::to_string(num_inputs_) + ", " +
                std::to_string(num_params_) + ") is smaller than the slots in use (" +
                std::to_string(a.inputs) + ", " + std::to_string(a.params) + ")");
  }
}

bool Circuit::is_symbolic() const {
  return std::any_of(gates_.begin(), gates_.end(),
                     [](const Gate& g) { return g.kind == GateKind::rz && !is_const(g.angle); });
}

bool Circuit::is_core() const {
  return std::all_of(gates_.begin(), gates_.end(),
                     [](const Gate& g) { return polyq::is_core(g.kind); });
}

std::vector<Gate> compact_gate(std::size_t qubit, AngleExpr angle) {
  return {Gate::sx(qubit), Gate::rz(qubit, angle), Gate::sx(qubit)};
}

BoundCircuit bind_circuit(const Circuit& circuit, std::span<const double> inputs,
                  std::span<const double> params) {
  if (inputs.size() != circuit.num_inputs()) {
    throw Error("input vector length mismatch: expected " + std::to_string(circuit.num_inputs()) +
                ", given " + std::to_string(inputs.size()));
  }
  if (params.size() != circuit.num_params()) {
    throw Error("parameter vector length mismatch: expected " +
                std::to_string(circuit.num_params()) + ", given " + std::to_string(params.size()));
  }
  BoundCircuit out{circuit.width(), {}};
  out.gates.reserve(circuit.size());
  for (const Gate& g : circuit.gates()) {
    double angle = 0.0;
    if (const auto* c = std::get_if<Const>(&g.angle)) angle = c->radians;
    else if (const auto* in = std::get_if<Input>(&g.angle)) angle = inputs[in->index];
    else angle = params[std::get<Param>(g.angle).index];
    out.gates.push_back({g.kind, g.q0, g.q1, angle});
  }
  return out;
}

Circuit to_circuit(const BoundCircuit& bound) {
  std::vector<Gate> gates;
  gates.reserve(bound.gates.size());
  for (const BoundGate& g : bound.gates) gates.push_back({g.kind, g.q0, g.q1, Const{g.angle}});
  return Circuit(bound.width, std::move(gates));
}

namespace {

template <typename G>
PulseCount count_pulses(const std::vector<G>& gates) {
  PulseCount pc;
  for (const G& g : gates) {
    if (is_two_qubit(g.kind)) ++pc.two_qubit;
    else if (g.kind != GateKind::rz) ++pc.one_qubit;
  }
  return pc;
}

// One step of a layered preset: a phi-box per listed qubit, then the Cz
// pairs that close the step.
struct Step {
  std::vector<std::pair<std::size_t, AngleExpr>> boxes;
  std::vector<std::pair<std::size_t, std::size_t>> entangle;
};

Circuit build_layered(std::size_t width, const std::vector<Step>& steps) {
  std::vector<Gate> gates;
  for (const Step& s : steps) {
    for (const auto& [q, angle] : s.boxes) {
      auto box = compact_gate(q, angle);
      gates.insert(gates.end(), box.begin(), box.end());
    }
    for (const auto& [a, b] : s.entangle) gates.push_back(Gate::cz(a, b));
  }
  return Circuit(width, std::move(gates));
}

// Two-qubit brick: every step boxes both qubits, Cz(0,1) between steps.
Circuit two_qubit_chain(const std::vector<std::pair<AngleExpr, AngleExpr>>& columns) {
  std::vector<Step> steps;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    Step s;
    s.boxes = {{0, columns[i].first}, {1, columns[i].second}};
    if (i + 1 < columns.size()) s.entangle = {{0, 1}};
    steps.push_back(std::move(s));
  }
  return build_layered(2, steps);
}

}  // namespace

PulseCount pulse_count(const Circuit& circuit) { return count_pulses(circuit.gates()); }
PulseCount pulse_count(const BoundCircuit& circuit) { return count_pulses(circuit.gates); }

Circuit preset(std::string_view name) {
  using W = Input;
  using T = Param;
  if (name == "iris2q") {
    // Features re-uploaded once: (w0,w1), (w2,w3), (w0,w1), (w2,w3).
    return two_qubit_chain({{W{0}, W{1}}, {T{0}, T{1}}, {W{2}, W{3}}, {T{2}, T{3}},
                            {W{0}, W{1}}, {T{4}, T{5}}, {W{2}, W{3}}, {T{6}, T{7}}});
  }
  if (name == "xor2q") {
    return two_qubit_chain({{W{0}, W{1}}, {T{0}, T{1}}, {T{2}, T{3}}});
  }
  if (name == "synth2q") {
    return two_qubit_chain({{W{0}, W{1}}, {T{0}, T{1}}, {W{0}, W{1}}, {T{2}, T{3}},
                            {T{4}, T{5}}, {W{0}, W{1}}, {T{6}, T{7}}, {W{0}, W{1}},
                            {T{8}, T{9}}, {T{10}, T{11}}});
  }
  if (name == "skin3q") {
    return build_layered(3, {
                                {{{0, W{0}}, {1, W{1}}, {2, W{2}}}, {{0, 2}}},
                                {{{0, T{0}}, {2, T{1}}}, {{0, 1}}},
                                {{{0, T{2}}, {1, T{3}}}, {{1, 2}}},
                                {{{1, T{4}}, {2, T{5}}}, {}},
                            });
  }
  throw Error("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"iris2q", "xor2q", "skin3q", "synth2q"}; }

namespace {

void emit_gate(std::ostringstream& os, GateKind kind, std::size_t q0, std::size_t q1,
               const std::string& angle) {
  os << gate_name(kind) << ' ' << q0;
  if (is_two_qubit(kind)) os << ' ' << q1;
  if (kind == GateKind::rz) os << ' ' << angle;
  os << '\n';
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error("line " + std::to_string(line) + ": expected a non-negative integer, got '" +
                std::string(tok) + "'");
  }
  return v;
}

AngleExpr parse_angle(std::string_view tok, std::size_t line) {
  if (!tok.empty() && (tok[0] == 'w' || tok[0] == 't')) {
    const std::size_t k = parse_index(tok.substr(1), line);
    if (tok[0] == 'w') return Input{k};
    return Param{k};
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error("line " + std::to_string(line) + ": bad angle '" + std::string(tok) + "'");
  }
  return Const{v};
}

}  // namespace

std::string to_text(const Circuit& circuit) {
  std::ostringstream os;
  os << "QUBITS " << circuit.width() << '\n';
  const Arity used = used_arity(circuit.gates());
  if (circuit.num_inputs() > used.inputs) os << "INPUTS " << circuit.num_inputs() << '\n';
  if (circuit.num_params() > used.params) os << "PARAMS " << circuit.num_params() << '\n';
  for (const Gate& g : circuit.gates()) emit_gate(os, g.kind, g.q0, g.q1, to_string(g.angle));
  return os.str();
}

std::string to_text(const BoundCircuit& circuit) {
  std::ostringstream os;
  os << "QUBITS " << circuit.width << '\n';
  for (const BoundGate& g : circuit.gates) emit_gate(os, g.kind, g.q0, g.q1, format_double(g.angle));
  return os.str();
}

Circuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> width;
  std::optional<std::size_t> inputs;
  std::optional<std::size_t> params;
  std::vector<Gate> gates;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& op = tok[0];
    auto expect = [&](std::size_t n) {
      if (tok.size() != n) {
        throw Error("line " + std::to_string(line_no) + ": '" + op + "' expects " +
                    std::to_string(n - 1) + " operand(s)");
      }
    };
    if (op == "QUBITS" || op == "INPUTS" || op == "PARAMS") {
      expect(2);
      const std::size_t v = parse_index(tok[1], line_no);
      (op == "QUBITS" ? width : op == "INPUTS" ? inputs : params) = v;
      continue;
    }
    if (!width) throw Error("line " + std::to_string(line_no) + ": gate before QUBITS header");
    if (op == "SX" || op == "H") {
      expect(2);
      const std::size_t q = parse_index(tok[1], line_no);
      gates.push_back(op == "SX" ? Gate::sx(q) : Gate::h(q));
    } else if (op == "RZ") {
      expect(3);
      gates.push_back(Gate::rz(parse_index(tok[1], line_no), parse_angle(tok[2], line_no)));
    } else if (op == "CZ" || op == "CNOT" || op == "ZZ") {
      expect(3);
      const std::size_t a = parse_index(tok[1], line_no);
      const std::size_t b = parse_index(tok[2], line_no);
      gates.push_back(op == "CZ" ? Gate::cz(a, b) : op == "ZZ" ? Gate::zz(a, b) : Gate::cnot(a, b));
    } else {
      throw Error("line " + std::to_string(line_no) + ": unknown gate '" + op + "'");
    }
  }
  if (!width) throw Error("missing QUBITS header");
  const Arity used = used_arity(gates);
  return Circuit(*width, std::move(gates), inputs.value_or(used.inputs),
                 params.value_or(used.params));
}

}  // namespace polyq
