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

#include "polyq/translate.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "polyq/error.hpp"
#include "polyq/unitary.hpp"

namespace polyq {

namespace {

constexpr double kPi = std::numbers::pi;

BoundGate make(GateKind kind, std::size_t q0, std::size_t q1 = 0, double angle = 0.0) {
  return {kind, q0, is_two_qubit(kind) ? q1 : q0, angle};
}

BoundGate rz(std::size_t q, double angle) { return make(GateKind::rz, q, q, wrap_angle(angle)); }

void require_core(const BoundCircuit& c) {
  for (const BoundGate& g : c.gates) {
    if (!is_core(g.kind)) throw Error("translation input must use only SX, RZ and CZ gates");
  }
}

// Indices of the gates acting on each qubit, in circuit order.
std::vector<std::vector<std::size_t>> per_qubit(const BoundCircuit& c) {
  std::vector<std::vector<std::size_t>> out(c.width);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const BoundGate& g = c.gates[i];
    out[g.q0].push_back(i);
    if (is_two_qubit(g.kind)) out[g.q1].push_back(i);
  }
  return out;
}

std::size_t count_sx(const BoundCircuit& c, const std::vector<std::size_t>& line, std::size_t from,
                     int step) {
  std::size_t n = 0;
  for (auto k = static_cast<std::ptrdiff_t>(from); k >= 0 && k < std::ssize(line); k += step) {
    const BoundGate& g = c.gates[line[static_cast<std::size_t>(k)]];
    if (is_two_qubit(g.kind)) break;
    if (g.kind == GateKind::sx) ++n;
  }
  return n;
}

// Target choice for each Cz: the operand whose neighbouring segments both
// hold a full sx Rz sx block can absorb the Hadamards for free. Greedy,
// left to right; ties go to the higher-index operand.
std::vector<std::size_t> choose_targets(const BoundCircuit& c) {
  const auto lines = per_qubit(c);
  std::vector<std::size_t> target(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const BoundGate& g = c.gates[i];
    if (g.kind != GateKind::cz) continue;
    auto score = [&](std::size_t q) {
      const auto& line = lines[q];
      const auto pos = static_cast<std::size_t>(std::find(line.begin(), line.end(), i) - line.begin());
      int s = 0;
      if (pos > 0 && count_sx(c, line, pos - 1, -1) >= 2) ++s;
      if (count_sx(c, line, pos + 1, +1) >= 2) ++s;
      return s;
    };
    target[i] = score(g.q0) > score(g.q1) ? g.q0 : g.q1;
  }
  return target;
}

bool is_kind(const std::vector<BoundGate>& s, std::size_t i, GateKind k) {
  return i < s.size() && s[i].kind == k;
}

// Matches sx [Rz] sx at i; returns the block length (2 or 3) and its angle.
std::size_t match_block(const std::vector<BoundGate>& s, std::size_t i, double& angle) {
  if (!is_kind(s, i, GateKind::sx)) return 0;
  if (is_kind(s, i + 1, GateKind::sx)) {
    angle = 0.0;
    return 2;
  }
  if (is_kind(s, i + 1, GateKind::rz) && is_kind(s, i + 2, GateKind::sx)) {
    angle = s[i + 1].angle;
    return 3;
  }
  return 0;
}

// Applies the three Hadamard absorption identities until none matches.
void absorb_hadamards(std::vector<BoundGate>& s, std::size_t q) {
  const BoundGate sx = make(GateKind::sx, q);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size() && !changed; ++i) {
      double f = 0.0;
      if (is_kind(s, i, GateKind::h)) {
        const std::size_t n = match_block(s, i + 1, f);
        if (n == 0) continue;
        std::vector<BoundGate> rep;
        std::size_t consumed = 1 + n;
        if (is_kind(s, i + 1 + n, GateKind::h)) {
          rep = {sx, rz(q, kPi - f), sx};
          ++consumed;
        } else {
          rep = {rz(q, kPi), sx, rz(q, f + kPi / 2), sx};
        }
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i),
                s.begin() + static_cast<std::ptrdiff_t>(i + consumed));
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), rep.begin(), rep.end());
        changed = true;
      } else if (const std::size_t n = match_block(s, i, f); n && is_kind(s, i + n, GateKind::h)) {
        const std::vector<BoundGate> rep = {sx, rz(q, f + kPi / 2), sx, rz(q, kPi)};
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i),
                s.begin() + static_cast<std::ptrdiff_t>(i + n + 1));
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), rep.begin(), rep.end());
        changed = true;
      }
    }
  }
}

Mat2 product(const std::vector<BoundGate>& s) {
  Mat2 u = identity2();
  for (const BoundGate& g : s) {
    switch (g.kind) {
      case GateKind::sx: u = sx_matrix() * u; break;
      case GateKind::rz: u = rz_matrix(g.angle) * u; break;
      case GateKind::h: u = h_matrix() * u; break;
      default: throw Error("two-qubit gate inside a single-qubit segment");
    }
  }
  return u;
}

// Full Z-sx decomposition of a segment still holding a Hadamard, provided
// it needs no more sx gates than the segment had before.
std::vector<BoundGate> resynthesize_segment(const std::vector<BoundGate>& s, std::size_t q,
                                            std::size_t budget) {
  const Mat2 u = product(s);
  const int need = minimal_sx_count(u);
  if (static_cast<std::size_t>(need) > budget) {
    throw Error("qubit " + std::to_string(q) +
                ": Hadamard cannot be absorbed without adding pulses; optimize the circuit "
                "into maximal form first");
  }
  const BoundGate sx = make(GateKind::sx, q);
  std::vector<BoundGate> out;
  auto push = [&](double a) {
    if (std::abs(wrap_angle(a)) >= 1e-12) out.push_back(rz(q, a));
  };
  if (need == 0) {
    push(diagonal_rz_angle(u));
  } else if (need == 1) {
    const ZsxzAngles a = decompose_zsxz(u);
    push(a.lambda);
    out.push_back(sx);
    push(a.phi);
  } else {
    const ZsxAngles a = decompose_zsxzsxz(u);
    push(a.lambda);
    out.push_back(sx);
    push(a.alpha);
    out.push_back(sx);
    push(a.phi);
  }
  return out;
}

BoundCircuit to_cnot(const BoundCircuit& in) {
  const std::vector<std::size_t> target = choose_targets(in);
  BoundCircuit expanded{in.width, {}};
  for (std::size_t i = 0; i < in.gates.size(); ++i) {
    const BoundGate& g = in.gates[i];
    if (g.kind != GateKind::cz) {
      expanded.gates.push_back(g);
      continue;
    }
    const std::size_t t = target[i];
    const std::size_t c = t == g.q0 ? g.q1 : g.q0;
    expanded.gates.push_back(make(GateKind::h, t));
    expanded.gates.push_back(make(GateKind::cnot, c, t));
    expanded.gates.push_back(make(GateKind::h, t));
  }

  // Rewrite each qubit's single-qubit runs between two-qubit gates and
  // place the results right before the run's closing two-qubit gate.
  using Key = std::tuple<std::size_t, int, std::size_t, std::size_t>;
  std::vector<std::pair<Key, BoundGate>> placed;
  const auto& gates = expanded.gates;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (is_two_qubit(gates[i].kind)) placed.push_back({Key{i, 1, 0, 0}, gates[i]});
  }
  const auto lines = per_qubit(expanded);
  for (std::size_t q = 0; q < in.width; ++q) {
    std::vector<std::size_t> run;
    auto flush = [&](std::size_t boundary) {
      std::vector<BoundGate> body;
      for (std::size_t i : run) body.push_back(gates[i]);
      const bool has_h = std::any_of(body.begin(), body.end(),
                                     [](const BoundGate& g) { return g.kind == GateKind::h; });
      if (!has_h) {
        for (std::size_t i : run) placed.push_back({Key{i, 1, 0, 0}, gates[i]});
      } else {
        const auto budget = static_cast<std::size_t>(std::count_if(
            body.begin(), body.end(), [](const BoundGate& g) { return g.kind == GateKind::sx; }));
        absorb_hadamards(body, q);
        if (std::any_of(body.begin(), body.end(),
                        [](const BoundGate& g) { return g.kind == GateKind::h; })) {
          body = resynthesize_segment(body, q, budget);
        }
        for (std::size_t k = 0; k < body.size(); ++k) {
          placed.push_back({Key{boundary, 0, q, k}, body[k]});
        }
      }
      run.clear();
    };
    for (std::size_t i : lines[q]) {
      if (is_two_qubit(gates[i].kind)) flush(i);
      else run.push_back(i);
    }
    flush(gates.size());
  }
  std::stable_sort(placed.begin(), placed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  BoundCircuit out{in.width, {}};
  for (auto& [key, g] : placed) out.gates.push_back(g);
  return out;
}

BoundCircuit to_zz(const BoundCircuit& in) {
  BoundCircuit out{in.width, {}};
  for (const BoundGate& g : in.gates) {
    if (g.kind != GateKind::cz) {
      out.gates.push_back(g);
      continue;
    }
    out.gates.push_back(rz(g.q0, -kPi / 2));
    out.gates.push_back(rz(g.q1, -kPi / 2));
    out.gates.push_back(make(GateKind::zz, g.q0, g.q1));
  }
  return out;
}

}  // namespace

TargetGateSet parse_target(std::string_view name) {
  if (name == "cz") return TargetGateSet::cz;
  if (name == "cnot") return TargetGateSet::cnot;
  if (name == "zz") return TargetGateSet::zz;
  throw Error("unknown target gate set '" + std::string(name) + "' (expected cz, cnot or zz)");
}

std::string_view target_name(TargetGateSet target) {
  switch (target) {
    case TargetGateSet::cz: return "cz";
    case TargetGateSet::cnot: return "cnot";
    case TargetGateSet::zz: return "zz";
  }
  return "?";
}

BoundCircuit translate(const BoundCircuit& circuit, TargetGateSet target) {
  require_core(circuit);
  BoundCircuit out;
  switch (target) {
    case TargetGateSet::cz: return circuit;
    case TargetGateSet::zz: out = to_zz(circuit); break;
    case TargetGateSet::cnot: out = to_cnot(circuit); break;
  }
  if (pulse_count(out) != pulse_count(circuit)) {
    throw Error("translation changed the pulse count");
  }
  return out;
}

Distribution simulate_extended(const BoundCircuit& circuit) { return distribution(circuit); }

}  // namespace polyq
