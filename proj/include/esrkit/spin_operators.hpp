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
#ifndef ESRKIT_SPIN_OPERATORS_HPP
#define ESRKIT_SPIN_OPERATORS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "esrkit/constants.hpp"
#include "esrkit/orientation.hpp"
#include "esrkit/spin_system.hpp"

namespace esrkit {

/// Angular-momentum matrices in the |S, m> basis with m descending from +S.
/// This basis convention is fixed so matrix fixtures stay stable.
struct SpinOperators {
  Eigen::MatrixXcd sx, sy, sz;

  int dim() const { return static_cast<int>(sz.rows()); }
};

inline SpinOperators spin_operators(double spin) {
  if (!is_half_integer_spin(spin))
    throw std::invalid_argument("spin_operators: S must be a half-integer >= 1/2");
  const int d = static_cast<int>(std::lround(2.0 * spin)) + 1;
  Eigen::MatrixXcd raising = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const double m = spin - col;
    sz(col, col) = m;
    if (col > 0) {
      // <m+1| S+ |m> = sqrt(S(S+1) - m(m+1)), |m+1> sits one row above.
      raising(col - 1, col) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
    }
  }
  SpinOperators ops;
  ops.sx = 0.5 * (raising + raising.adjoint());
  ops.sy = std::complex<double>(0.0, -0.5) * (raising - raising.adjoint());
  ops.sz = sz;
  return ops;
}

/// H = g*(mu_B/h)*B*(n.S) + D*Sz^2 + E*(Sx^2 - Sy^2), in GHz.
inline Eigen::MatrixXcd build_hamiltonian(const SpinSystem& sys, double field_t,
                                          const Orientation& dir) {
  if (!(field_t >= 0.0)) throw std::invalid_argument("build_hamiltonian: field must be >= 0");
  const SpinOperators ops = spin_operators(sys.spin);
  const auto n = dir.unit_vector();
  const double zeeman = sys.g * constants::mu_bohr_ghz_per_t * field_t;
  Eigen::MatrixXcd h = zeeman * (n[0] * ops.sx + n[1] * ops.sy + n[2] * ops.sz);
  h += sys.d_ghz * (ops.sz * ops.sz);
  h += sys.e_ghz * (ops.sx * ops.sx - ops.sy * ops.sy);
  return h;
}

struct Eigensystem {
  Eigen::VectorXd values;    ///< ascending, GHz
  Eigen::MatrixXcd vectors;  ///< columns are eigenvectors, unitary
};

/// Diagonalizes a Hermitian matrix. Input must be Hermitian to 1e-10
/// relative; eigenvalues come back sorted ascending.
inline Eigensystem eigensystem(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigensystem: matrix must be square");
  const double scale = h.cwiseAbs().maxCoeff();
  const double deviation = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > 1e-10 * std::max(scale, 1e-30))
    throw std::invalid_argument("eigensystem: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensystem: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// One allowed transition between eigenstates i < j.
struct Transition {
  int from;
  int to;
  double frequency_ghz;  ///< lambda_j - lambda_i >= 0
  double intensity;      ///< |<i| Sx |j>|^2 in the eigenbasis
};

inline std::vector<Transition> transitions(const Eigen::VectorXd& eigenvalues,
                                           const Eigen::MatrixXcd& eigenvectors,
                                           const Eigen::MatrixXcd& sx) {
  const int d = static_cast<int>(eigenvalues.size());
  const Eigen::MatrixXcd sx_eig = eigenvectors.adjoint() * sx * eigenvectors;
  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      out.push_back({i, j, eigenvalues[j] - eigenvalues[i], std::norm(sx_eig(i, j))});
  return out;
}

/// exp(-2*pi*i*H*t) for H in GHz and t in ns, via the eigendecomposition.
/// Used for multilevel unitary checks; relaxation is not modeled here.
inline Eigen::MatrixXcd propagator(const Eigen::MatrixXcd& h_ghz, double t_ns) {
  const Eigensystem es = eigensystem(h_ghz);
  const int d = static_cast<int>(es.values.size());
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < d; ++i) {
    const double angle = -constants::two_pi * es.values[i] * t_ns;
    phases[i] = std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

}  // namespace esrkit

#endif  // ESRKIT_SPIN_OPERATORS_HPP
