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
 * Pulse-preserving translation of {sx, Rz, Cz} circuits to other native
 * two-qubit gates.
 *
 *   cz   : identity.
 *   zz   : Cz(i,j) -> Rz(i,-pi/2) Rz(j,-pi/2) ZZ(i,j), ZZ = diag(1, i, i, 1).
 *   cnot : Cz(i,j) -> H(t) CNOT(c,t) H(t), after which every Hadamard is
 *          absorbed into the neighbouring sx Rz sx block:
 *            H sx Rz(f) sx H = sx Rz(pi - f) sx
 *            H sx Rz(f) sx   = Rz(pi) sx Rz(f + pi/2) sx
 *            sx Rz(f) sx H   = sx Rz(f + pi/2) sx Rz(pi)
 *          (read both sides left to right in circuit order). The +pi/2
 *          shift follows from sx = Rx(+pi/2).
 */

#include <string_view>

#include "polyq/circuit.hpp"
#include "polyq/simulator.hpp"

namespace polyq {

enum class TargetGateSet { cz, cnot, zz };

TargetGateSet parse_target(std::string_view name);
std::string_view target_name(TargetGateSet target);

/// Throws when the input is not a {sx, Rz, Cz} circuit, or when a Hadamard
/// cannot be absorbed without adding pulses. The output pulse count always
/// equals the input's. Callers wanting a minimal result run optimize() first.
BoundCircuit translate(const BoundCircuit& circuit, TargetGateSet target);

/// Outcome distribution of a circuit over any supported gate tags.
Distribution simulate_extended(const BoundCircuit& circuit);

}  // namespace polyq
