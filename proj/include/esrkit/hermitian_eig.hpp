/* Copyright 2026 The Esrkit Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ESRKIT_HERMITIAN_EIG_HPP
#define ESRKIT_HERMITIAN_EIG_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace esrkit {

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
inline void hermitian_eigenvalues_2(const Eigen::Matrix2cd& a, double ev[2]) {
  const double d0 = a(0, 0).real();
  const double d1 = a(1, 1).real();
  const double mean = 0.5 * (d0 + d1);
  const double radius = std::sqrt(0.25 * (d0 - d1) * (d0 - d1) + std::norm(a(0, 1)));
  ev[0] = mean - radius;
  ev[1] = mean + radius;
}

/// Eigenvalues of a 3x3 Hermitian matrix via the trigonometric solution of
/// the characteristic cubic, ascending. Accurate to ~1e-8 of the matrix
/// norm near degeneracies, far better away from them; used only where full
/// decompositions would dominate runtime (the resonance-field scans).
inline void hermitian_eigenvalues_3(const Eigen::Matrix3cd& a, double ev[3]) {
  const double d0 = a(0, 0).real();
  const double d1 = a(1, 1).real();
  const double d2 = a(2, 2).real();
  const std::complex<double> a01 = a(0, 1);
  const std::complex<double> a02 = a(0, 2);
  const std::complex<double> a12 = a(1, 2);

  const double q = (d0 + d1 + d2) / 3.0;
  const double off = std::norm(a01) + std::norm(a02) + std::norm(a12);
  const double b0 = d0 - q;
  const double b1 = d1 - q;
  const double b2 = d2 - q;
  const double p2 = b0 * b0 + b1 * b1 + b2 * b2 + 2.0 * off;
  if (p2 <= 0.0 || !(p2 > 1e-300)) {
    ev[0] = ev[1] = ev[2] = q;
    return;
  }
  const double p = std::sqrt(p2 / 6.0);
  const double det = b0 * b1 * b2 + 2.0 * (a01 * a12 * std::conj(a02)).real() -
                     b0 * std::norm(a12) - b1 * std::norm(a02) - b2 * std::norm(a01);
  double r = 0.5 * det / (p * p * p);
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double two_thirds_pi = 2.0943951023931953;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + two_thirds_pi);
  ev[0] = lo;
  ev[1] = 3.0 * q - hi - lo;
  ev[2] = hi;
}

/// Ascending eigenvalues of a Hermitian matrix of any size; analytic for
/// dimensions 2 and 3, Eigen elsewhere. Hermiticity is the caller's
/// responsibility (only the upper triangle and real diagonal are read in
/// the analytic paths).
inline void hermitian_eigenvalues(const Eigen::MatrixXcd& h, double* out) {
  const int d = static_cast<int>(h.rows());
  if (d == 1) {
    out[0] = h(0, 0).real();
  } else if (d == 2) {
    hermitian_eigenvalues_2(h.topLeftCorner<2, 2>(), out);
  } else if (d == 3) {
    hermitian_eigenvalues_3(h.topLeftCorner<3, 3>(), out);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()[i];
  }
}

}  // namespace esrkit

#endif  // ESRKIT_HERMITIAN_EIG_HPP
