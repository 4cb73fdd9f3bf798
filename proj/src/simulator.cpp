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

#include "polyq/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {

namespace {

void check_width(std::size_t width) {
  if (width == 0 || width > kMaxQubits) {
    throw Error("circuit width " + std::to_string(width) + " outside the supported range 1.." +
                std::to_string(kMaxQubits));
  }
}

class Kernel {
 public:
  Kernel(std::size_t width, std::vector<Complex>& s) : width_(width), s_(s) {}

  std::size_t mask(std::size_t q) const { return std::size_t{1} << (width_ - 1 - q); }

  void apply(const Mat2& m, std::size_t q) {
    const std::size_t bit = mask(q);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (i & bit) continue;
      const Complex a = s_[i];
      const Complex b = s_[i | bit];
      s_[i] = m[0] * a + m[1] * b;
      s_[i | bit] = m[2] * a + m[3] * b;
    }
  }

  void rz(std::size_t q, double phi) {
    const std::size_t bit = mask(q);
    const Complex lo = std::polar(1.0, -phi / 2);
    const Complex hi = std::conj(lo);
    for (std::size_t i = 0; i < s_.size(); ++i) s_[i] *= (i & bit) ? hi : lo;
  }

  void cz(std::size_t a, std::size_t b) {
    const std::size_t both = mask(a) | mask(b);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if ((i & both) == both) s_[i] = -s_[i];
    }
  }

  void cnot(std::size_t control, std::size_t target) {
    const std::size_t c = mask(control);
    const std::size_t t = mask(target);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if ((i & c) && !(i & t)) std::swap(s_[i], s_[i | t]);
    }
  }

  // diag(1, i, i, 1): the two-qubit gate fixed by Cz ≡ Rz(-pi/2) ⊗ Rz(-pi/2) · ZZ.
  void zz(std::size_t a, std::size_t b) {
    const std::size_t ma = mask(a);
    const std::size_t mb = mask(b);
    const Complex i_unit{0.0, 1.0};
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (static_cast<bool>(i & ma) != static_cast<bool>(i & mb)) s_[i] *= i_unit;
    }
  }

  void gate(GateKind kind, std::size_t q0, std::size_t q1, double angle) {
    switch (kind) {
      case GateKind::sx: apply(sx_matrix(), q0); break;
      case GateKind::rz: rz(q0, angle); break;
      case GateKind::cz: cz(q0, q1); break;
      case GateKind::h: apply(h_matrix(), q0); break;
      case GateKind::cnot: cnot(q0, q1); break;
      case GateKind::zz: zz(q0, q1); break;
    }
  }

 private:
  std::size_t width_;
  std::vector<Complex>& s_;
};

void reset(std::size_t width, std::vector<Complex>& s) {
  s.assign(std::size_t{1} << width, Complex{0.0, 0.0});
  s[0] = 1.0;
}

}  // namespace

std::string bitstring(std::size_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t q = 0; q < width; ++q) {
    if (index & (std::size_t{1} << (width - 1 - q))) s[q] = '1';
  }
  return s;
}

std::size_t basis_index(std::string_view bits) {
  std::size_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error("invalid bitstring '" + std::string(bits) + "'");
    v = (v << 1) | static_cast<std::size_t>(c == '1');
  }
  return v;
}

double Distribution::probability(std::string_view bits) const {
  if (bits.size() != width) throw Error("bitstring length does not match distribution width");
  return probabilities[basis_index(bits)];
}

std::uint64_t ShotCounts::count(std::string_view bits) const {
  if (bits.size() != width) throw Error("bitstring length does not match shot-count width");
  return counts[basis_index(bits)];
}

StateVector statevector(const BoundCircuit& circuit) {
  check_width(circuit.width);
  StateVector out{circuit.width, {}};
  reset(circuit.width, out.amplitudes);
  Kernel k(circuit.width, out.amplitudes);
  for (const BoundGate& g : circuit.gates) {
    if (g.q0 >= circuit.width || (is_two_qubit(g.kind) && g.q1 >= circuit.width)) {
      throw Error("gate addresses a qubit outside the circuit width");
    }
    k.gate(g.kind, g.q0, g.q1, g.angle);
  }
  return out;
}

Distribution distribution(const BoundCircuit& circuit) {
  const StateVector sv = statevector(circuit);
  Distribution d{sv.width, {}};
  probabilities_into(sv.amplitudes, d.probabilities);
  return d;
}

ShotCounts sample(const Distribution& dist, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error("shot count must be at least 1");
  std::vector<double> cdf(dist.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += dist.probabilities[i];
    cdf[i] = acc;
  }
  ShotCounts out{dist.width, shots, std::vector<std::uint64_t>(cdf.size(), 0)};
  Rng rng(seed);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    // Skip zero-probability outcomes that share the same cumulative value.
    while (dist.probabilities[idx] == 0.0 && idx > 0) --idx;
    ++out.counts[idx];
  }
  return out;
}

ShotCounts sample(const BoundCircuit& circuit, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error("shot count must be at least 1");
  return sample(distribution(circuit), shots, seed);
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (a.probabilities.size() != b.probabilities.size()) {
    throw Error("total variation between distributions of different widths");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
    tv += std::abs(a.probabilities[i] - b.probabilities[i]);
  }
  return 0.5 * tv;
}

void simulate_into(const Circuit& circuit, std::span<const double> inputs,
                   std::span<const double> params, std::vector<Complex>& state) {
  check_width(circuit.width());
  reset(circuit.width(), state);
  Kernel k(circuit.width(), state);
  for (const Gate& g : circuit.gates()) {
    double angle = 0.0;
    if (g.kind == GateKind::rz) {
      if (const auto* c = std::get_if<Const>(&g.angle)) angle = c->radians;
      else if (const auto* in = std::get_if<Input>(&g.angle)) angle = inputs[in->index];
      else angle = params[std::get<Param>(g.angle).index];
    }
    k.gate(g.kind, g.q0, g.q1, angle);
  }
}

void probabilities_into(std::span<const Complex> state, std::vector<double>& probs) {
  probs.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) probs[i] = std::norm(state[i]);
}

}  // namespace polyq
