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

#include <cmath>
#include <numbers>

namespace polyq {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double arg_ratio(Complex num, Complex den) { return std::arg(num / den); }

}  // namespace

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

Mat2 sx_matrix() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {Complex{r, 0}, Complex{0, -r}, Complex{0, -r}, Complex{r, 0}};
}

Mat2 rz_matrix(double phi) {
  return {std::polar(1.0, -phi / 2), 0.0, 0.0, std::polar(1.0, phi / 2)};
}

Mat2 h_matrix() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {r, r, r, -r};
}

bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (std::abs(b[i]) > std::abs(b[k])) k = i;
  }
  if (std::abs(b[k]) < tol) return false;
  const Complex phase = a[k] / b[k];
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(a[i] - phase * b[i]) > tol) return false;
  }
  return true;
}

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

ZsxAngles decompose_zsxzsxz(const Mat2& u) {
  // sx Rz(a) sx = [[-i sin(a/2), -i cos(a/2)], [-i cos(a/2), i sin(a/2)]],
  // so |U00| = sin(alpha/2) and |U10| = cos(alpha/2) fix alpha; the outer
  // Z rotations only move phases around.
  ZsxAngles out;
  out.alpha = 2.0 * std::atan2(std::abs(u[0]), std::abs(u[2]));
  const Mat2 v = sx_matrix() * rz_matrix(out.alpha) * sx_matrix();
  constexpr double kTiny = 1e-12;
  const bool has_diag = std::abs(u[0]) > kTiny && std::abs(v[0]) > kTiny;
  const bool has_off = std::abs(u[2]) > kTiny && std::abs(v[2]) > kTiny;
  if (has_diag && has_off) {
    const double d0 = arg_ratio(u[0], v[0]);  // g - phi/2 - lambda/2
    const double d1 = arg_ratio(u[2], v[2]);  // g + phi/2 - lambda/2
    const double d3 = arg_ratio(u[3], v[3]);  // g + phi/2 + lambda/2
    out.phi = wrap_angle(d1 - d0);
    out.lambda = wrap_angle(d3 - d1);
  } else if (has_diag) {
    out.phi = wrap_angle(arg_ratio(u[3], v[3]) - arg_ratio(u[0], v[0]));
  } else {
    out.phi = wrap_angle(arg_ratio(u[2], v[2]) - arg_ratio(u[1], v[1]));
  }
  return out;
}

ZsxzAngles decompose_zsxz(const Mat2& u) {
  // Rz(a) sx Rz(b) = (1/sqrt2) [[e^{-i(a+b)/2}, -i e^{i(b-a)/2}],
  //                             [-i e^{i(a-b)/2}, e^{i(a+b)/2}]].
  const double a = std::arg(u[2] / -kI) - std::arg(u[0]);
  const double a_plus_b = std::arg(u[3] / u[0]);
  return {wrap_angle(a), wrap_angle(a_plus_b - a)};
}

double diagonal_rz_angle(const Mat2& u) { return wrap_angle(std::arg(u[3] / u[0])); }

int minimal_sx_count(const Mat2& u, double tol) {
  if (std::abs(u[1]) < tol && std::abs(u[2]) < tol) return 0;
  if (std::abs(std::norm(u[0]) - 0.5) < tol) return 1;
  return 2;
}

}  // namespace polyq
