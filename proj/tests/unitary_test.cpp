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


#include <gtest/gtest.h>
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


#include "polyq/unitary.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "polyq/random.hpp"

namespace polyq {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

void expect_mat_near(const Mat2& a, const Mat2& b, double tol = 1e-12) {
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(a[k].real(), b[k].real(), tol) << "entry " << k;
    EXPECT_NEAR(a[k].imag(), b[k].imag(), tol) << "entry " << k;
  }
}

Mat2 random_unitary(Rng& rng) {
  // Rz(a) sx Rz(b) sx Rz(c) spans SU(2); a random phase on top.
  const Mat2 u = rz_matrix(rng.uniform(-kPi, kPi)) * sx_matrix() * rz_matrix(rng.uniform(-kPi, kPi)) *
                 sx_matrix() * rz_matrix(rng.uniform(-kPi, kPi));
  const Complex g = std::exp(kI * rng.uniform(-kPi, kPi));
  return {g * u[0], g * u[1], g * u[2], g * u[3]};
}

TEST(Unitary, GateMatrices) {
  const double s = 1.0 / std::sqrt(2.0);
  expect_mat_near(sx_matrix(), {s, -kI * s, -kI * s, s});
  expect_mat_near(rz_matrix(kPi), {-kI, 0.0, 0.0, kI});
  expect_mat_near(h_matrix(), {s, s, s, -s});
  expect_mat_near(sx_matrix() * sx_matrix(), {0.0, -kI, -kI, 0.0});  // -i X
}

TEST(Unitary, ProductIsRowByColumn) {
  const Mat2 a{1.0, 2.0, 3.0, 4.0};
  const Mat2 b{Complex(0, 1), 1.0, 2.0, Complex(0, -1)};
  expect_mat_near(a * b, {Complex(4, 1), Complex(1, -2), Complex(8, 3), Complex(3, -4)});
}

TEST(Unitary, PhiBoxAtPiIsZ) {
  // sx Rz(pi) sx equals Z up to phase: it leaves |0> in place.
  const Mat2 box = sx_matrix() * rz_matrix(kPi) * sx_matrix();
  EXPECT_TRUE(equal_up_to_phase(box, rz_matrix(kPi)));
  EXPECT_NEAR(std::norm(box[2]), 0.0, 1e-15);
  // And sx Rz(0) sx is X up to phase.
  EXPECT_TRUE(equal_up_to_phase(sx_matrix() * sx_matrix(), {0.0, 1.0, 1.0, 0.0}));
}

TEST(Unitary, HadamardAbsorptionIdentities) {
  const Mat2 h = h_matrix(), s = sx_matrix();
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const double f = rng.uniform(-kPi, kPi);
    // Operator order is the reverse of circuit order.
    EXPECT_TRUE(equal_up_to_phase(h * s * rz_matrix(f) * s * h, s * rz_matrix(kPi - f) * s));
    EXPECT_TRUE(equal_up_to_phase(s * rz_matrix(f) * s * h,
                                  s * rz_matrix(f + kPi / 2) * s * rz_matrix(kPi)));
    EXPECT_TRUE(equal_up_to_phase(h * s * rz_matrix(f) * s,
                                  rz_matrix(kPi) * s * rz_matrix(f + kPi / 2) * s));
  }
}

TEST(Unitary, EqualUpToPhase) {
  const Mat2 u = sx_matrix() * rz_matrix(0.3);
  const Complex g = std::exp(kI * 1.1);
  EXPECT_TRUE(equal_up_to_phase(u, {g * u[0], g * u[1], g * u[2], g * u[3]}));
  EXPECT_FALSE(equal_up_to_phase(u, rz_matrix(0.3)));
  EXPECT_FALSE(equal_up_to_phase(rz_matrix(0.3), rz_matrix(0.31)));
}

TEST(Unitary, WrapAngle) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.5), 0.5);
  EXPECT_NEAR(wrap_angle(2 * kPi + 0.5), 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(-kPi - 0.5), kPi - 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
}

TEST(Unitary, DecomposeTwoSxReconstructs) {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const Mat2 u = random_unitary(rng);
    const ZsxAngles a = decompose_zsxzsxz(u);
    EXPECT_GE(a.alpha, -1e-12);
    EXPECT_LE(a.alpha, kPi + 1e-12);
    EXPECT_TRUE(equal_up_to_phase(
        u, rz_matrix(a.phi) * sx_matrix() * rz_matrix(a.alpha) * sx_matrix() * rz_matrix(a.lambda)));
  }
}

TEST(Unitary, DecomposeDegenerate) {
  for (const Mat2& u : {rz_matrix(0.7), sx_matrix() * sx_matrix() * rz_matrix(-1.3), identity2()}) {
    const ZsxAngles a = decompose_zsxzsxz(u);
    EXPECT_TRUE(equal_up_to_phase(
        u, rz_matrix(a.phi) * sx_matrix() * rz_matrix(a.alpha) * sx_matrix() * rz_matrix(a.lambda)));
  }
}

TEST(Unitary, DecomposeOneSx) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const Mat2 u = rz_matrix(rng.uniform(-kPi, kPi)) * sx_matrix() * rz_matrix(rng.uniform(-kPi, kPi));
    ASSERT_EQ(minimal_sx_count(u), 1);
    const ZsxzAngles a = decompose_zsxz(u);
    EXPECT_TRUE(equal_up_to_phase(u, rz_matrix(a.phi) * sx_matrix() * rz_matrix(a.lambda)));
  }
}

TEST(Unitary, DiagonalAngle) {
  EXPECT_NEAR(diagonal_rz_angle(rz_matrix(1.25)), 1.25, 1e-14);
  EXPECT_NEAR(diagonal_rz_angle(rz_matrix(0.4) * rz_matrix(0.5)), 0.9, 1e-14);
}

TEST(Unitary, MinimalSxCount) {
  EXPECT_EQ(minimal_sx_count(identity2()), 0);
  EXPECT_EQ(minimal_sx_count(rz_matrix(2.0)), 0);
  EXPECT_EQ(minimal_sx_count(sx_matrix() * rz_matrix(kPi) * sx_matrix()), 0);
  EXPECT_EQ(minimal_sx_count(h_matrix()), 1);
  EXPECT_EQ(minimal_sx_count(sx_matrix() * rz_matrix(0.4)), 1);
  EXPECT_EQ(minimal_sx_count(sx_matrix() * rz_matrix(0.4) * sx_matrix()), 2);
  EXPECT_EQ(minimal_sx_count(sx_matrix() * sx_matrix()), 2);
}

}  // namespace
}  // namespace polyq
