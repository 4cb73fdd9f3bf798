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

#include <cstddef>
#include <numbers>
#include <vector>

#include "polyq/circuit.hpp"
#include "polyq/random.hpp"

namespace polyq::testing {

/// Random {sx, Rz, Cz} circuit with constant angles. A fifth of the Rz
/// angles are multiples of pi/2 so that degenerate segments show up.
inline Circuit random_core_circuit(Rng& rng, std::size_t width, std::size_t length) {
  constexpr double kPi = std::numbers::pi;
  std::vector<Gate> gates;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t pick = rng.index(width > 1 ? 5 : 3);
    const std::size_t q = rng.index(width);
    if (pick == 0) {
      gates.push_back(Gate::sx(q));
    } else if (pick <= 2) {
      const double angle = rng.uniform() < 0.2 ? (static_cast<double>(rng.index(8)) - 3.0) * kPi / 2
                                               : rng.uniform(-kPi, kPi);
      gates.push_back(Gate::rz(q, angle));
    } else {
      std::size_t r = q;
      while (r == q) r = rng.index(width);
      gates.push_back(Gate::cz(q, r));
    }
  }
  return Circuit(width, std::move(gates));
}

}  // namespace polyq::testing
