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

// Dense-matrix reference evaluation used as an independent oracle. Full
// 2^N x 2^N operators are assembled from literal gate matrices with
// Kronecker products; nothing here calls into the simulator.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "polyq/circuit.hpp"

namespace polyq::oracle {

using C = std::complex<double>;

struct Dense {
  std::size_t n = 0;
  std::vector<C> a;  // row-major
  C& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  C at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

inline Dense eye(std::size_t n) {
  Dense d{n, std::vector<C>(n * n)};
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 1.0;
  return d;
}

inline Dense mul(const Dense& x, const Dense& y) {
  Dense out{x.n, std::vector<C>(x.n * x.n)};
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k)
      for (std::size_t j = 0; j < x.n; ++j) out.at(i, j) += x.at(i, k) * y.at(k, j);
  return out;
}

inline Dense kron(const Dense& x, const Dense& y) {
  Dense out{x.n * y.n, std::vector<C>(x.n * y.n * x.n * y.n)};
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l) out.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
  return out;
}

inline Dense one_qubit(const BoundGate& g) {
  const double s = 1.0 / std::sqrt(2.0);
  const C i(0.0, 1.0);
  switch (g.kind) {
    case GateKind::sx: return {2, {s, -i * s, -i * s, s}};
    case GateKind::rz: return {2, {std::exp(-i * (g.angle / 2)), 0.0, 0.0, std::exp(i * (g.angle / 2))}};
    case GateKind::h: return {2, {s, s, s, -s}};
    default: return eye(2);
  }
}

// Operator of a single gate on n qubits; qubit 0 is the most significant
// tensor factor.
inline Dense embed(const BoundGate& g, std::size_t width) {
  const std::size_t dim = std::size_t{1} << width;
  if (!is_two_qubit(g.kind)) {
    Dense out = eye(1);
    for (std::size_t q = 0; q < width; ++q) out = kron(out, q == g.q0 ? one_qubit(g) : eye(2));
    return out;
  }
  Dense out{dim, std::vector<C>(dim * dim)};
  const C i(0.0, 1.0);
  for (std::size_t b = 0; b < dim; ++b) {
    const bool x0 = (b >> (width - 1 - g.q0)) & 1;
    const bool x1 = (b >> (width - 1 - g.q1)) & 1;
    switch (g.kind) {
      case GateKind::cz: out.at(b, b) = (x0 && x1) ? -1.0 : 1.0; break;
      case GateKind::zz: out.at(b, b) = (x0 != x1) ? i : C(1.0); break;
      case GateKind::cnot: {
        const std::size_t to = x0 ? b ^ (std::size_t{1} << (width - 1 - g.q1)) : b;
        out.at(to, b) = 1.0;
        break;
      }
      default: break;
    }
  }
  return out;
}

inline Dense unitary(const BoundCircuit& c) {
  Dense u = eye(std::size_t{1} << c.width);
  for (const BoundGate& g : c.gates) u = mul(embed(g, c.width), u);
  return u;
}

inline std::vector<double> probabilities(const BoundCircuit& c) {
  const Dense u = unitary(c);
  std::vector<double> p(u.n);
  for (std::size_t r = 0; r < u.n; ++r) p[r] = std::norm(u.at(r, 0));
  return p;
}

}  // namespace polyq::oracle
