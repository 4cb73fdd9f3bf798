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

#include <array>
#include <complex>
#include <cstddef>

namespace polyq {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

Mat2 operator*(const Mat2& a, const Mat2& b);

Mat2 identity2();
/// sqrt(X) = Rx(pi/2) = (1/sqrt2) [[1, -i], [-i, 1]].
Mat2 sx_matrix();
/// Rz(phi) = diag(exp(-i phi/2), exp(+i phi/2)).
Mat2 rz_matrix(double phi);
Mat2 h_matrix();

/// True when a = exp(i g) b for some real g, entrywise within tol.
bool equal_up_to_phase(const Mat2& a, const Mat2& b, double tol = 1e-9);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double angle);

/// Angles of U ≡ Rz(phi) · sx · Rz(alpha) · sx · Rz(lambda) (operator order;
/// Rz(lambda) acts first). alpha lies in [0, pi].
struct ZsxAngles {
  double phi = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
};

/// Canonical two-sx decomposition of any single-qubit unitary. At the
/// degenerate points alpha = 0 and alpha = pi only phi ± lambda is
/// determined; lambda is then set to 0 and the whole rotation lands in phi.
ZsxAngles decompose_zsxzsxz(const Mat2& u);

/// Angles of U ≡ Rz(phi) · sx · Rz(lambda). Valid only when every entry of U
/// has magnitude 1/sqrt2 (see minimal_sx_count).
struct ZsxzAngles {
  double phi = 0.0;
  double lambda = 0.0;
};
ZsxzAngles decompose_zsxz(const Mat2& u);

/// Rotation angle t of a diagonal U ≡ Rz(t).
double diagonal_rz_angle(const Mat2& u);

/// Fewest sx gates needed to realize U up to phase together with Rz gates:
/// 0 when U is diagonal, 1 when all entries have magnitude 1/sqrt2, else 2.
int minimal_sx_count(const Mat2& u, double tol = 1e-12);

}  // namespace polyq
