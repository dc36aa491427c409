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

#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "esrkit/hermitian_eig.hpp"
#include "esrkit/spin_operators.hpp"
#include "esrkit/spin_system.hpp"

using namespace esrkit;

namespace {

Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = std::complex<double>(dist(rng), dist(rng));
  return 0.5 * (a + a.adjoint().eval());
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SpinOperators, SpinHalfIsPauliOverTwo) {
  const SpinOperators ops = spin_operators(0.5);
  ASSERT_EQ(ops.dim(), 2);
  EXPECT_NEAR(ops.sz(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(ops.sz(1, 1).real(), -0.5, 1e-15);
  EXPECT_NEAR(ops.sx(0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(ops.sy(0, 1).imag(), -0.5, 1e-15);
}

TEST(SpinOperators, SpinOneLadderCoefficients) {
  const SpinOperators ops = spin_operators(1.0);
  ASSERT_EQ(ops.dim(), 3);
  EXPECT_NEAR(ops.sz(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(ops.sz(1, 1).real(), 0.0, 1e-15);
  EXPECT_NEAR(ops.sz(2, 2).real(), -1.0, 1e-15);
  // S+ |m=-1> = sqrt(2) |m=0>; raising = Sx + i Sy
  const Eigen::MatrixXcd raising = ops.sx + std::complex<double>(0, 1) * ops.sy;
  EXPECT_NEAR(raising(1, 2).real(), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(raising(0, 1).real(), std::sqrt(2.0), 1e-14);
}

TEST(SpinOperators, CasimirSpinOne) {
  const SpinOperators ops = spin_operators(1.0);
  const Eigen::MatrixXcd casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  EXPECT_LT(max_abs(casimir - 2.0 * Eigen::MatrixXcd::Identity(3, 3)), 1e-12);
}

TEST(SpinOperators, CommutatorsAndCasimirAcrossSpins) {
  const std::complex<double> i(0.0, 1.0);
  for (double s : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const SpinOperators ops = spin_operators(s);
    EXPECT_LT(max_abs(ops.sx * ops.sy - ops.sy * ops.sx - i * ops.sz), 1e-12) << "S=" << s;
    EXPECT_LT(max_abs(ops.sy * ops.sz - ops.sz * ops.sy - i * ops.sx), 1e-12) << "S=" << s;
    EXPECT_LT(max_abs(ops.sz * ops.sx - ops.sx * ops.sz - i * ops.sy), 1e-12) << "S=" << s;
    const Eigen::MatrixXcd casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    const int d = ops.dim();
    EXPECT_LT(max_abs(casimir - s * (s + 1.0) * Eigen::MatrixXcd::Identity(d, d)), 1e-12)
        << "S=" << s;
  }
}

TEST(SpinOperators, RejectsInvalidSpin) {
  EXPECT_THROW(spin_operators(0.3), std::invalid_argument);
  EXPECT_THROW(spin_operators(0.0), std::invalid_argument);
  EXPECT_THROW(spin_operators(-0.5), std::invalid_argument);
}

TEST(SpinSystem, ValidatesInvariants) {
  EXPECT_NO_THROW(SpinSystem(1.0, 1.9, 21.0, 1.9));
  EXPECT_NO_THROW(SpinSystem(1.0, 2.0, 21.0, 7.0));        // E exactly D/3
  EXPECT_THROW(SpinSystem(1.0, 2.0, 21.0, 7.5), std::invalid_argument);
  EXPECT_THROW(SpinSystem(1.0, 0.0, 21.0, 1.9), std::invalid_argument);
  EXPECT_THROW(SpinSystem(1.0, -2.0, 21.0, 1.9), std::invalid_argument);
  EXPECT_THROW(SpinSystem(0.7, 2.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(SpinSystem(1.0, 2.0, 0.0, 0.1), std::invalid_argument);
  EXPECT_EQ(SpinSystem(1.5, 2.0, 0.0, 0.0).dim(), 4);
}

TEST(SpinSystem, JsonRoundTrip) {
  SpinSystem sys(1.0, 1.9, 21.0, 1.9,
                 {NuclearCoupling::from_isotope("1H", 0.3, true)});
  const nlohmann::json j = to_json(sys);
  EXPECT_DOUBLE_EQ(j.at("S").get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j.at("D_GHz").get<double>(), 21.0);
  const SpinSystem back = spin_system_from_json(j);
  EXPECT_DOUBLE_EQ(back.g, sys.g);
  EXPECT_DOUBLE_EQ(back.e_ghz, sys.e_ghz);
  ASSERT_EQ(back.nuclei.size(), 1u);
  EXPECT_EQ(back.nuclei[0].isotope, "1H");
  EXPECT_TRUE(back.nuclei[0].second_harmonic);
}

TEST(SpinSystem, JsonRejectsUnknownKeys) {
  nlohmann::json j = {{"S", 0.5}, {"g", 2.0}, {"D_GHz", 0.0}, {"E_GHz", 0.0}, {"zfs", 1.0}};
  EXPECT_THROW(spin_system_from_json(j), config_error);
}

TEST(Hamiltonian, AxialZeroFieldEigenvalues) {
  const SpinSystem sys(1.0, 2.0, 21.0, 0.0);
  const auto h = build_hamiltonian(sys, 0.0, Orientation(0.0, 0.0));
  const Eigensystem es = eigensystem(h);
  EXPECT_NEAR(es.values[0], 0.0, 1e-12);
  EXPECT_NEAR(es.values[1], 21.0, 1e-12);
  EXPECT_NEAR(es.values[2], 21.0, 1e-12);
}

TEST(Hamiltonian, RhombicZeroFieldClosedForm) {
  const SpinSystem sys(1.0, 2.0, 21.0, 1.9);
  const auto h = build_hamiltonian(sys, 0.0, Orientation(1.1, 2.2));
  const Eigensystem es = eigensystem(h);
  EXPECT_NEAR(es.values[0], 0.0, 1e-12);
  EXPECT_NEAR(es.values[1], 21.0 - 1.9, 1e-12);
  EXPECT_NEAR(es.values[2], 21.0 + 1.9, 1e-12);
}

TEST(Hamiltonian, SpinHalfZeemanSplitting) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const auto h = build_hamiltonian(sys, 0.34652, Orientation(0.7, 1.3));
  const Eigensystem es = eigensystem(h);
  const double splitting = es.values[1] - es.values[0];
  const double closed_form = 2.0 * constants::mu_bohr_ghz_per_t * 0.34652;
  EXPECT_NEAR(splitting, closed_form, 1e-12);
  EXPECT_NEAR(splitting, 9.700, 1e-3);
}

TEST(Hamiltonian, HermiticityAndTraceIdentity) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> angle(0.0, 3.14159);
  std::uniform_real_distribution<double> field(0.0, 2.0);
  for (double s : {0.5, 1.0, 1.5, 2.5}) {
    const SpinSystem sys(s, 1.9, 21.0, 1.9);
    for (int trial = 0; trial < 10; ++trial) {
      const Orientation dir(angle(rng), angle(rng));
      const auto h = build_hamiltonian(sys, field(rng), dir);
      const double scale = std::max(max_abs(h), 1e-30);
      EXPECT_LT(max_abs(h - h.adjoint().eval()), 1e-12 * scale);
      // Zeeman and E terms are traceless, so the trace is set by D alone.
      const double expected = 21.0 * s * (s + 1.0) * (2.0 * s + 1.0) / 3.0;
      EXPECT_NEAR(h.trace().real(), expected, 1e-12 * std::max(1.0, expected));
      EXPECT_NEAR(h.trace().imag(), 0.0, 1e-12);
    }
  }
}

TEST(Hamiltonian, ETermIsTraceless) {
  const SpinOperators ops = spin_operators(1.5);
  const Eigen::MatrixXcd e_term = ops.sx * ops.sx - ops.sy * ops.sy;
  EXPECT_NEAR(std::abs(e_term.trace()), 0.0, 1e-12);
}

TEST(Hamiltonian, IsotropicLimitOrientationIndependent) {
  const SpinSystem sys(1.0, 2.0, 0.0, 0.0);
  const auto reference = eigensystem(build_hamiltonian(sys, 0.5, Orientation(0.0, 0.0)));
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> angle(0.0, 3.14159);
  for (int trial = 0; trial < 12; ++trial) {
    const auto es = eigensystem(build_hamiltonian(sys, 0.5, Orientation(angle(rng), angle(rng))));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(es.values[i], reference.values[i], 1e-12);
  }
}

TEST(EigensystemOp, DiagonalPassThrough) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
  h(1, 1) = 19.1;
  h(2, 2) = 22.9;
  const Eigensystem es = eigensystem(h);
  EXPECT_NEAR(es.values[0], 0.0, 1e-14);
  EXPECT_NEAR(es.values[1], 19.1, 1e-14);
  EXPECT_NEAR(es.values[2], 22.9, 1e-14);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(es.vectors(c, c)), 1.0, 1e-12);
}

TEST(EigensystemOp, TwoByTwoOffDiagonal) {
  Eigen::MatrixXcd h(2, 2);
  h << 0, 1, 1, 0;
  const Eigensystem es = eigensystem(h);
  EXPECT_NEAR(es.values[0], -1.0, 1e-14);
  EXPECT_NEAR(es.values[1], 1.0, 1e-14);
}

TEST(EigensystemOp, ReconstructionAndUnitarity) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(3, rng);
    const Eigensystem es = eigensystem(h);
    const Eigen::MatrixXcd reconstructed =
        es.vectors * es.values.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
        es.vectors.adjoint();
    EXPECT_LT(max_abs(h * es.vectors - reconstructed * es.vectors), 1e-10);
    EXPECT_LT(max_abs(es.vectors.adjoint() * es.vectors - Eigen::MatrixXcd::Identity(3, 3)),
              1e-12);
    EXPECT_LE(es.values[0], es.values[1]);
    EXPECT_LE(es.values[1], es.values[2]);
  }
}

TEST(EigensystemOp, RejectsNonHermitian) {
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, 1.0, 2.0, 0.0;
  EXPECT_THROW(eigensystem(h), std::invalid_argument);
}

TEST(Transitions, SpinHalfSingleLine) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const SpinOperators ops = spin_operators(0.5);
  const auto h = build_hamiltonian(sys, 0.34652, Orientation(0.0, 0.0));
  const Eigensystem es = eigensystem(h);
  const auto list = transitions(es.values, es.vectors, ops.sx);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_NEAR(list[0].frequency_ghz, 9.700, 1e-3);
  EXPECT_NEAR(list[0].intensity, 0.25, 1e-12);
}

TEST(Transitions, RhombicGapAtZeroField) {
  const SpinSystem sys(1.0, 1.9, 21.0, 1.9);
  const SpinOperators ops = spin_operators(1.0);
  const auto h = build_hamiltonian(sys, 0.0, Orientation(0.3, 0.4));
  const Eigensystem es = eigensystem(h);
  const auto list = transitions(es.values, es.vectors, ops.sx);
  ASSERT_EQ(list.size(), 3u);
  bool found_gap = false;
  for (const auto& t : list) {
    EXPECT_GE(t.frequency_ghz, 0.0);
    EXPECT_GE(t.intensity, 0.0);
    if (std::abs(t.frequency_ghz - 3.8) < 1e-9) found_gap = true;
  }
  EXPECT_TRUE(found_gap);
}

TEST(Transitions, GaugeInvariantUnderEigenvectorPhases) {
  std::mt19937 rng(33);
  const SpinSystem sys(1.0, 1.9, 21.0, 1.9);
  const SpinOperators ops = spin_operators(1.0);
  const auto h = build_hamiltonian(sys, 0.37, Orientation(0.9, 0.2));
  Eigensystem es = eigensystem(h);
  const auto base = transitions(es.values, es.vectors, ops.sx);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  Eigen::MatrixXcd rotated = es.vectors;
  for (int c = 0; c < 3; ++c)
    rotated.col(c) *= std::exp(std::complex<double>(0.0, phase(rng)));
  const auto turned = transitions(es.values, rotated, ops.sx);
  for (std::size_t i = 0; i < base.size(); ++i)
    EXPECT_NEAR(base[i].intensity, turned[i].intensity, 1e-12);
}

TEST(FastEigenvalues, MatchesFullSolver) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    for (int dim : {2, 3}) {
      const Eigen::MatrixXcd h = random_hermitian(dim, rng);
      const Eigensystem es = eigensystem(h);
      std::vector<double> fast(dim);
      hermitian_eigenvalues(h, fast.data());
      const double scale = std::max(1.0, max_abs(h));
      for (int i = 0; i < dim; ++i) EXPECT_NEAR(fast[i], es.values[i], 1e-8 * scale);
    }
  }
}

TEST(FastEigenvalues, HandlesMultipleOfIdentity) {
  Eigen::Matrix3cd h = 4.2 * Eigen::Matrix3cd::Identity();
  double ev[3];
  hermitian_eigenvalues_3(h, ev);
  for (double v : ev) EXPECT_DOUBLE_EQ(v, 4.2);
}

TEST(Propagator, UnitaryAndPhaseCorrect) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(4, rng);
    const Eigen::MatrixXcd u = propagator(h, 17.3);
    EXPECT_LT(max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)), 1e-12);
  }
  // diagonal Hamiltonian: pure phases exp(-2*pi*i*E*t)
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 0) = 0.25;  // GHz
  const Eigen::MatrixXcd u = propagator(h, 1.0);
  EXPECT_NEAR(u(0, 0).real(), std::cos(constants::two_pi * 0.25), 1e-12);
  EXPECT_NEAR(u(0, 0).imag(), -std::sin(constants::two_pi * 0.25), 1e-12);
  EXPECT_NEAR(u(1, 1).real(), 1.0, 1e-12);
}
