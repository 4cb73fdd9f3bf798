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

#include "polyq/passes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "json.hpp"
#include "polyq/error.hpp"
#include "polyq/random.hpp"
#include "polyq/simulator.hpp"
#include "polyq/unitary.hpp"

namespace polyq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

void require_core(const Circuit& c) {
  if (!c.is_core()) throw Error("circuit passes only accept SX, RZ and CZ gates");
}

Circuit rebuild(const Circuit& like, std::vector<Gate> gates) {
  return Circuit(like.width(), std::move(gates), like.num_inputs(), like.num_params());
}

Circuit keep_marked(const Circuit& c, const std::vector<bool>& keep) {
  std::vector<Gate> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (keep[i]) out.push_back(c.gates()[i]);
  }
  return rebuild(c, std::move(out));
}

void set_count(std::size_t* applied, std::size_t n) {
  if (applied) *applied = n;
}

bool is_const_rz(const Gate& g) { return g.kind == GateKind::rz && is_const(g.angle); }

double const_angle(const Gate& g) { return std::get<Const>(g.angle).radians; }

}  // namespace

Circuit remove_initial(const Circuit& circuit, std::size_t* applied) {
  require_core(circuit);
  // A deleted gate leaves its qubits untouched, so one forward sweep reaches
  // the fixpoint.
  std::vector<bool> touched(circuit.width(), false);
  std::vector<bool> keep(circuit.size(), true);
  std::size_t n = 0;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const Gate& g = circuit.gates()[i];
    switch (g.kind) {
      case GateKind::sx: touched[g.q0] = true; break;
      case GateKind::rz:
        if (!touched[g.q0]) keep[i] = false;
        break;
      case GateKind::cz:
        if (!touched[g.q0] || !touched[g.q1]) keep[i] = false;
        break;
      default: break;
    }
    if (!keep[i]) ++n;
  }
  set_count(applied, n);
  return keep_marked(circuit, keep);
}

Circuit remove_final(const Circuit& circuit, std::size_t* applied) {
  require_core(circuit);
  std::vector<bool> later(circuit.width(), false);
  std::vector<bool> keep(circuit.size(), true);
  std::size_t n = 0;
  for (std::size_t r = circuit.size(); r-- > 0;) {
    const Gate& g = circuit.gates()[r];
    switch (g.kind) {
      case GateKind::sx: later[g.q0] = true; break;
      case GateKind::rz:
        if (!later[g.q0]) keep[r] = false;
        break;
      case GateKind::cz:
        if (!later[g.q0] && !later[g.q1]) keep[r] = false;
        else later[g.q0] = later[g.q1] = true;
        break;
      default: break;
    }
    if (!keep[r]) ++n;
  }
  set_count(applied, n);
  return keep_marked(circuit, keep);
}

Circuit cancel_double_cz(const Circuit& circuit, std::size_t* applied) {
  require_core(circuit);
  // Per-qubit stacks of surviving gate indices; a Cz whose operands both
  // have the same Cz on top cancels it, which also handles nested pairs.
  std::vector<std::vector<std::size_t>> stack(circuit.width());
  std::vector<bool> keep(circuit.size(), true);
  std::size_t n = 0;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const Gate& g = circuit.gates()[i];
    if (g.kind == GateKind::cz) {
      auto& sa = stack[g.q0];
      auto& sb = stack[g.q1];
      if (!sa.empty() && !sb.empty() && sa.back() == sb.back() &&
          circuit.gates()[sa.back()] == g) {
        keep[sa.back()] = false;
        keep[i] = false;
        sa.pop_back();
        sb.pop_back();
        ++n;
        continue;
      }
      sa.push_back(i);
      sb.push_back(i);
    } else {
      stack[g.q0].push_back(i);
    }
  }
  set_count(applied, n);
  return keep_marked(circuit, keep);
}

Circuit merge_rz(const Circuit& circuit, std::size_t* applied) {
  require_core(circuit);
  std::vector<Gate> gates = circuit.gates();
  std::vector<std::size_t> last(circuit.width(), kNone);
  std::vector<bool> keep(gates.size(), true);
  std::size_t n = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    Gate& g = gates[i];
    if (is_const_rz(g) && last[g.q0] != kNone && is_const_rz(gates[last[g.q0]])) {
      Gate& prev = gates[last[g.q0]];
      prev.angle = Const{wrap_angle(const_angle(prev) + const_angle(g))};
      keep[i] = false;
      ++n;
      continue;
    }
    last[g.q0] = i;
    if (g.two_qubit()) last[g.q1] = i;
  }
  set_count(applied, n);
  std::vector<Gate> out;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (keep[i]) out.push_back(gates[i]);
  }
  return rebuild(circuit, std::move(out));
}

Circuit remove_zero_rz(const Circuit& circuit, std::size_t* applied) {
  require_core(circuit);
  std::vector<bool> keep(circuit.size(), true);
  std::size_t n = 0;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const Gate& g = circuit.gates()[i];
    if (is_const_rz(g) && std::abs(wrap_angle(const_angle(g))) < kZeroAngleTolerance) {
      keep[i] = false;
      ++n;
    }
  }
  set_count(applied, n);
  return keep_marked(circuit, keep);
}

namespace {

// Sort key placing emitted gates: original gates keep (index, 1); gates
// synthesized for a segment go right before the segment's closing boundary
// (or right before its first gate for a carried rotation) with phase 0.
using Key = std::tuple<std::size_t, int, std::size_t, std::size_t>;

struct Segment {
  std::size_t qubit = 0;
  std::vector<std::size_t> members;  // indices into the circuit
  std::size_t boundary = 0;          // closing Cz index, or circuit size
  bool first = false;
  bool last = false;
};

std::string shape_of(const std::vector<Gate>& seg) {
  std::string s;
  for (const Gate& g : seg) s.push_back(g.kind == GateKind::sx ? 'S' : 'Z');
  return s;
}

bool canonical_shape(const std::string& shape, bool first) {
  static const std::vector<std::string> kFirst = {"", "S", "SS", "SZS"};
  static const std::vector<std::string> kLater = {"", "S", "SS", "SZS", "ZS", "ZSS", "ZSZS"};
  const auto& allowed = first ? kFirst : kLater;
  return std::find(allowed.begin(), allowed.end(), shape) != allowed.end();
}

Mat2 segment_unitary(const std::vector<Gate>& seg, double carry) {
  Mat2 u = rz_matrix(carry);
  for (const Gate& g : seg) {
    u = (g.kind == GateKind::sx ? sx_matrix() : rz_matrix(const_angle(g))) * u;
  }
  return u;
}

void push_rz(std::vector<Gate>& out, std::size_t q, double angle) {
  const double w = wrap_angle(angle);
  if (std::abs(w) >= kZeroAngleTolerance) out.push_back(Gate::rz(q, w));
}

// Pulse-minimal replacement for a constant segment whose unitary is u.
// Returns the gates to emit (circuit order) and sets the Z rotation to
// carry into the next segment.
std::vector<Gate> synthesize(const Mat2& u, std::size_t q, bool first, bool last,
                             double& carry_out) {
  std::vector<Gate> out;
  carry_out = 0.0;
  switch (minimal_sx_count(u)) {
    case 0:
      if (!first) carry_out = diagonal_rz_angle(u);
      break;
    case 1: {
      const ZsxzAngles a = decompose_zsxz(u);  // u ≡ Rz(phi) sx Rz(lambda)
      if (!first) push_rz(out, q, a.lambda);
      out.push_back(Gate::sx(q));
      carry_out = a.phi;
      break;
    }
    default: {
      const ZsxAngles a = decompose_zsxzsxz(u);
      if (!first) push_rz(out, q, a.lambda);
      out.push_back(Gate::sx(q));
      push_rz(out, q, a.alpha);
      out.push_back(Gate::sx(q));
      carry_out = a.phi;
      break;
    }
  }
  if (last) carry_out = 0.0;
  return out;
}

std::vector<Segment> segments_of(const Circuit& c) {
  std::vector<Segment> done;
  std::vector<Segment> open(c.width());
  for (std::size_t q = 0; q < c.width(); ++q) {
    open[q].qubit = q;
    open[q].first = true;
  }
  auto close = [&](std::size_t q, std::size_t boundary, bool last) {
    Segment s = std::move(open[q]);
    s.boundary = boundary;
    s.last = last;
    done.push_back(std::move(s));
    open[q] = Segment{};
    open[q].qubit = q;
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gates()[i];
    if (g.kind == GateKind::cz) {
      close(g.q0, i, false);
      close(g.q1, i, false);
    } else {
      open[g.q0].members.push_back(i);
    }
  }
  for (std::size_t q = 0; q < c.width(); ++q) close(q, c.size(), true);
  // Segments must be visited in per-qubit order for the carries; `done`
  // already is, since each qubit's segments close in circuit order.
  return done;
}

}  // namespace

Circuit resynthesize(const Circuit& circuit, RewriteReport* report) {
  require_core(circuit);
  const auto& gates = circuit.gates();
  std::vector<std::pair<Key, Gate>> placed;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind == GateKind::cz) placed.push_back({Key{i, 1, 0, 0}, gates[i]});
  }
  std::vector<double> carry(circuit.width(), 0.0);
  std::size_t rewritten = 0;
  for (const Segment& seg : segments_of(circuit)) {
    const std::size_t q = seg.qubit;
    std::vector<Gate> body;
    for (std::size_t i : seg.members) body.push_back(gates[i]);
    const bool symbolic = std::any_of(body.begin(), body.end(), [](const Gate& g) {
      return g.kind == GateKind::rz && !is_const(g.angle);
    });
    auto keep_verbatim = [&] {
      for (std::size_t i : seg.members) placed.push_back({Key{i, 1, 0, 0}, gates[i]});
    };
    if (symbolic) {
      if (carry[q] != 0.0) {
        std::vector<Gate> pre;
        push_rz(pre, q, carry[q]);
        for (const Gate& g : pre) placed.push_back({Key{seg.members.front(), 0, q, 0}, g});
      }
      carry[q] = 0.0;
      keep_verbatim();
      const std::string shape = shape_of(body);
      const auto sx = static_cast<std::size_t>(std::count(shape.begin(), shape.end(), 'S'));
      const std::size_t rz = shape.size() - sx;
      if (sx > 2 || rz > (seg.first ? 1u : 2u)) {
        if (report) {
          report->warnings.push_back("qubit " + std::to_string(q) +
                                     ": symbolic segment '" + shape +
                                     "' exceeds the maximal form and was not resynthesized");
        }
      }
      continue;
    }
    const Mat2 u = segment_unitary(body, carry[q]);
    const std::string shape = shape_of(body);
    const auto sx = std::count(shape.begin(), shape.end(), 'S');
    if (carry[q] == 0.0 && sx == minimal_sx_count(u) && canonical_shape(shape, seg.first)) {
      keep_verbatim();
      continue;
    }
    double next = 0.0;
    std::vector<Gate> fresh = synthesize(u, q, seg.first, seg.last, next);
    carry[q] = next;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      placed.push_back({Key{seg.boundary, 0, q, k}, fresh[k]});
    }
    if (!(fresh == body)) ++rewritten;
  }
  std::stable_sort(placed.begin(), placed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Gate> out;
  out.reserve(placed.size());
  for (auto& [key, g] : placed) out.push_back(g);
  if (report) report->applications["resynthesize"] += rewritten;
  return rebuild(circuit, std::move(out));
}

OptimizeResult optimize(const Circuit& circuit) {
  require_core(circuit);
  RewriteReport report;
  for (const char* rule : {"remove_initial", "remove_final", "cancel_double_cz", "merge_rz",
                           "remove_zero_rz", "resynthesize"}) {
    report.applications[rule] = 0;
  }
  report.before = pulse_count(circuit);
  Circuit c = circuit;
  constexpr std::size_t kMaxRounds = 64;
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    const Circuit prev = c;
    std::size_t n = 0;
    c = remove_initial(c, &n);
    report.applications["remove_initial"] += n;
    c = remove_final(c, &n);
    report.applications["remove_final"] += n;
    c = cancel_double_cz(c, &n);
    report.applications["cancel_double_cz"] += n;
    c = merge_rz(c, &n);
    report.applications["merge_rz"] += n;
    c = remove_zero_rz(c, &n);
    report.applications["remove_zero_rz"] += n;
    RewriteReport round_report;
    c = resynthesize(c, &round_report);
    report.applications["resynthesize"] += round_report.applications["resynthesize"];
    report.rounds = round + 1;
    if (c == prev) {
      // Warnings are only meaningful for the final shape.
      report.warnings = std::move(round_report.warnings);
      break;
    }
  }
  report.after = pulse_count(c);
  return {std::move(c), std::move(report)};
}

std::string RewriteReport::to_json() const {
  nlohmann::ordered_json j;
  j["applications"] = applications;
  j["pulses_before"] = {{"one_qubit", before.one_qubit}, {"two_qubit", before.two_qubit}};
  j["pulses_after"] = {{"one_qubit", after.one_qubit}, {"two_qubit", after.two_qubit}};
  j["rounds"] = rounds;
  j["warnings"] = warnings;
  return j.dump(2);
}

std::optional<std::string> maximal_form_violation(const Circuit& circuit) {
  for (const Segment& seg : segments_of(circuit)) {
    std::vector<Gate> body;
    for (std::size_t i : seg.members) body.push_back(circuit.gates()[i]);
    const std::string shape = shape_of(body);
    const auto sx = std::count(shape.begin(), shape.end(), 'S');
    const auto rz = static_cast<std::ptrdiff_t>(shape.size()) - sx;
    bool ok = true;
    if (seg.first) {
      // Must be a subsequence of "SZS".
      const std::string pattern = "SZS";
      std::size_t p = 0;
      for (char ch : shape) {
        while (p < pattern.size() && pattern[p] != ch) ++p;
        if (p == pattern.size()) {
          ok = false;
          break;
        }
        ++p;
      }
    } else {
      ok = sx <= 2 && rz <= 2;
    }
    if (!ok) {
      return "qubit " + std::to_string(seg.qubit) + " segment ending at gate " +
             std::to_string(seg.boundary) + " has shape '" + shape + "'";
    }
  }
  return std::nullopt;
}

EquivalenceResult verify_equivalence(const Circuit& a, const Circuit& b, std::size_t trials,
                                     std::uint64_t seed, double tolerance) {
  if (a.width() != b.width() || a.num_inputs() != b.num_inputs() ||
      a.num_params() != b.num_params()) {
    throw Error("equivalence check needs circuits of the same width and slot counts");
  }
  EquivalenceResult result;
  Rng rng(seed);
  std::vector<double> inputs(a.num_inputs());
  std::vector<double> params(a.num_params());
  std::vector<Complex> sa, sb;
  Distribution da{a.width(), {}}, db{b.width(), {}};
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& w : inputs) w = kPi - 2.0 * kPi * rng.uniform();
    for (double& p : params) p = kPi - 2.0 * kPi * rng.uniform();
    simulate_into(a, inputs, params, sa);
    simulate_into(b, inputs, params, sb);
    probabilities_into(sa, da.probabilities);
    probabilities_into(sb, db.probabilities);
    const double tv = total_variation(da, db);
    result.max_tv = std::max(result.max_tv, tv);
    result.trials = t + 1;
    if (tv > tolerance) {
      result.equivalent = false;
      result.inputs = inputs;
      result.params = params;
      break;
    }
  }
  return result;
}

}  // namespace polyq
