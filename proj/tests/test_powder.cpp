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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "esrkit/orientation.hpp"
#include "esrkit/resonance.hpp"
#include "esrkit/spectrum.hpp"

using namespace esrkit;

TEST(OrientationGrid, ProductSmallestCase) {
  const OrientationGrid grid = make_grid(2, GridScheme::product);
  ASSERT_EQ(grid.size(), 4u);
  double sum = 0.0;
  for (const auto& node : grid.points) {
    EXPECT_GT(node.weight, 0.0);
    sum += node.weight;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(OrientationGrid, NormalizationAndSymmetry) {
  for (GridScheme scheme : {GridScheme::spiral, GridScheme::product}) {
    for (int n : {3, 10, 37}) {
      const OrientationGrid grid = make_grid(n, scheme);
      double sum = 0.0, mean_z = 0.0;
      for (const auto& node : grid.points) {
        EXPECT_GT(node.weight, 0.0);
        EXPECT_GE(node.direction.theta, 0.0);
        EXPECT_LE(node.direction.theta, constants::pi);
        EXPECT_GE(node.direction.phi, 0.0);
        EXPECT_LT(node.direction.phi, constants::two_pi);
        sum += node.weight;
        mean_z += node.weight * std::cos(node.direction.theta);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12) << to_string(scheme) << " n=" << n;
      EXPECT_NEAR(mean_z, 0.0, 1e-12) << to_string(scheme) << " n=" << n;
    }
  }
}

TEST(OrientationGrid, SecondLegendreMomentVanishes) {
  for (GridScheme scheme : {GridScheme::spiral, GridScheme::product}) {
    const OrientationGrid grid = make_grid(50, scheme);
    double p2 = 0.0;
    for (const auto& node : grid.points) {
      const double z = std::cos(node.direction.theta);
      p2 += node.weight * 0.5 * (3.0 * z * z - 1.0);
    }
    EXPECT_NEAR(p2, 0.0, 1e-6) << to_string(scheme);
  }
}

TEST(OrientationGrid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(1, GridScheme::spiral), std::invalid_argument);
  EXPECT_THROW(grid_scheme_from_string("icosahedral"), std::invalid_argument);
  EXPECT_EQ(grid_scheme_from_string("spiral"), GridScheme::spiral);
  EXPECT_EQ(grid_scheme_from_string("product"), GridScheme::product);
}

TEST(ResonanceFields, SpinHalfClosedForm) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const auto res = resonance_fields(sys, Orientation(0.0, 0.0), 9.7, 0.0, 0.6);
  ASSERT_EQ(res.size(), 1u);
  const double expected = 9.7 / (2.0 * constants::mu_bohr_ghz_per_t);
  EXPECT_NEAR(res[0].field_t, expected, 2e-7);
  EXPECT_NEAR(res[0].intensity, 0.25, 1e-9);
  EXPECT_EQ(res[0].from, 0);
  EXPECT_EQ(res[0].to, 1);
}

TEST(ResonanceFields, AxialSpinOneLevelCrossing) {
  // along z with E=0 the m=0 -> m=-1 gap is D - g*(muB/h)*B
  const SpinSystem sys(1.0, 1.9, 21.0, 0.0);
  const auto res = resonance_fields(sys, Orientation(0.0, 0.0), 9.7, 0.0, 0.6);
  const double expected = (21.0 - 9.7) / (1.9 * constants::mu_bohr_ghz_per_t);
  bool found = false;
  for (const auto& r : res)
    if (std::abs(r.field_t - expected) < 1e-6) found = true;
  EXPECT_TRUE(found) << "expected a crossing near " << expected;
}

TEST(ResonanceFields, EmptyWhenNoCrossing) {
  const SpinSystem sys(1.0, 2.0, 21.0, 0.0);
  const auto res = resonance_fields(sys, Orientation(0.0, 0.0), 30.0, 0.0, 0.01);
  EXPECT_TRUE(res.empty());
}

TEST(ResonanceFields, RootCompletenessOnMonotoneBranch) {
  // S=1/2 branch is linear in B: exactly one root iff the field fits the range
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> gs(1.5, 2.5), nus(5.0, 15.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double g = gs(rng), nu = nus(rng);
    const SpinSystem sys(0.5, g, 0.0, 0.0);
    const double root = nu / (g * constants::mu_bohr_ghz_per_t);
    const auto res = resonance_fields(sys, Orientation(1.0, 0.5), nu, 0.0, 0.4);
    const std::size_t expected = root <= 0.4 ? 1u : 0u;
    ASSERT_EQ(res.size(), expected) << "g=" << g << " nu=" << nu;
    if (expected == 1u) EXPECT_NEAR(res[0].field_t, root, 2e-7);
  }
}

TEST(ResonanceFields, ValidatesArguments) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  EXPECT_THROW(resonance_fields(sys, Orientation(0, 0), 9.7, -0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(resonance_fields(sys, Orientation(0, 0), 9.7, 0.5, 0.4), std::invalid_argument);
  EXPECT_THROW(resonance_fields(sys, Orientation(0, 0), 0.0, 0.0, 0.5), std::invalid_argument);
}

TEST(EchoDetectedSpectrum, IsotropicLineIsGaussian) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const OrientationGrid grid = make_grid(16, GridScheme::spiral);
  const auto axis = uniform_axis(0.30, 0.40, 1001);
  const double sigma = 0.01 / constants::gaussian_fwhm_per_sigma;
  const Spectrum spec = echo_detected_spectrum(sys, grid, 9.7, axis, sigma);
  const double b0 = 9.7 / (2.0 * constants::mu_bohr_ghz_per_t);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double d = (axis[i] - b0) / sigma;
    max_dev = std::max(max_dev, std::abs(spec.amplitude[i] - std::exp(-0.5 * d * d)));
  }
  EXPECT_LT(max_dev, 1e-4);
  // FWHM read off the curve
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (spec.amplitude[i - 1] < 0.5 && spec.amplitude[i] >= 0.5) lo = axis[i];
    if (spec.amplitude[i - 1] >= 0.5 && spec.amplitude[i] < 0.5) hi = axis[i];
  }
  EXPECT_NEAR(hi - lo, 0.01, 3e-4);
}

TEST(EchoDetectedSpectrum, IsotropicLimitMatchesSingleOrientation) {
  const SpinSystem sys(0.5, 1.9, 0.0, 0.0);
  const auto axis = uniform_axis(0.32, 0.42, 501);
  const Spectrum averaged =
      echo_detected_spectrum(sys, make_grid(12, GridScheme::product), 9.7, axis, 0.004);
  OrientationGrid single;
  single.points.push_back({Orientation(0.0, 0.0), 1.0});
  const Spectrum one = echo_detected_spectrum(sys, single, 9.7, axis, 0.004);
  for (std::size_t i = 0; i < axis.size(); ++i)
    EXPECT_NEAR(averaged.amplitude[i], one.amplitude[i], 1e-9);
}

TEST(EchoDetectedSpectrum, PeakNormalizedExactly) {
  const SpinSystem sys(1.0, 2.0, 21.0, 1.9);
  const auto axis = uniform_axis(0.0, 0.8, 401);
  const Spectrum spec =
      echo_detected_spectrum(sys, make_grid(12, GridScheme::spiral), 9.7, axis, 0.01);
  double peak = 0.0;
  for (double v : spec.amplitude) {
    EXPECT_GE(v, 0.0);
    EXPECT_TRUE(std::isfinite(v));
    peak = std::max(peak, v);
  }
  EXPECT_EQ(peak, 1.0);
}

TEST(EchoDetectedSpectrum, ThreadCountDoesNotChangeBits) {
  const SpinSystem sys(1.0, 1.9, 21.0, 1.9);
  const auto axis = uniform_axis(0.0, 0.8, 401);
  const OrientationGrid grid = make_grid(14, GridScheme::spiral);
  SpectrumOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const Spectrum a = echo_detected_spectrum(sys, grid, 9.7, axis, 0.008, one);
  const Spectrum b = echo_detected_spectrum(sys, grid, 9.7, axis, 0.008, four);
  for (std::size_t i = 0; i < axis.size(); ++i)
    EXPECT_EQ(a.amplitude[i], b.amplitude[i]) << "bin " << i;
}

TEST(EchoDetectedSpectrum, LorentzianOption) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const auto axis = uniform_axis(0.30, 0.40, 501);
  SpectrumOptions opt;
  opt.lineshape = Lineshape::lorentzian;
  const Spectrum spec =
      echo_detected_spectrum(sys, make_grid(8, GridScheme::spiral), 9.7, axis, 0.004, opt);
  EXPECT_EQ(spec.lineshape, "lorentzian");
  const double b0 = 9.7 / (2.0 * constants::mu_bohr_ghz_per_t);
  // half maximum at one HWHM from the center
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (axis[i - 1] < b0 + 0.004 && axis[i] >= b0 + 0.004)
      EXPECT_NEAR(spec.amplitude[i], 0.5, 0.03);
  }
}

TEST(EchoDetectedSpectrum, PopulationWeightingStaysNormalized) {
  const SpinSystem sys(1.0, 2.0, 21.0, 1.9);
  const auto axis = uniform_axis(0.0, 0.8, 401);
  SpectrumOptions opt;
  opt.population_weighting = true;
  opt.temperature_k = 4.5;
  const Spectrum weighted =
      echo_detected_spectrum(sys, make_grid(10, GridScheme::spiral), 9.7, axis, 0.01, opt);
  const Spectrum plain =
      echo_detected_spectrum(sys, make_grid(10, GridScheme::spiral), 9.7, axis, 0.01);
  double peak = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    peak = std::max(peak, weighted.amplitude[i]);
    diff = std::max(diff, std::abs(weighted.amplitude[i] - plain.amplitude[i]));
  }
  EXPECT_EQ(peak, 1.0);
  EXPECT_GT(diff, 1e-4);  // weighting at 4.5 K against ~20 GHz levels is visible
}

TEST(EchoDetectedSpectrum, ValidatesAxisAndBroadening) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const OrientationGrid grid = make_grid(4, GridScheme::spiral);
  std::vector<double> warped = uniform_axis(0.3, 0.4, 101);
  warped[50] += 1e-3;
  EXPECT_THROW(echo_detected_spectrum(sys, grid, 9.7, warped, 0.004), std::invalid_argument);
  EXPECT_THROW(echo_detected_spectrum(sys, grid, 9.7, uniform_axis(0.3, 0.4, 101), 0.0),
               std::invalid_argument);
}

TEST(SpectrumCsv, RoundTrip) {
  const SpinSystem sys(0.5, 2.0, 0.0, 0.0);
  const auto axis = uniform_axis(0.30, 0.40, 101);
  Spectrum spec =
      echo_detected_spectrum(sys, make_grid(6, GridScheme::spiral), 9.7, axis, 0.004);
  spec.meta["note"] = "fixture";
  std::ostringstream buffer;
  write_spectrum_csv(spec, buffer);
  std::istringstream input(buffer.str());
  const Spectrum back = read_spectrum_csv(input);
  ASSERT_EQ(back.field_t.size(), spec.field_t.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    EXPECT_NEAR(back.field_t[i], spec.field_t[i], 1e-12);
    EXPECT_NEAR(back.amplitude[i], spec.amplitude[i], 1e-12);
  }
  EXPECT_DOUBLE_EQ(back.nu_mw_ghz, 9.7);
  EXPECT_EQ(back.grid_points, 36);
  EXPECT_EQ(back.lineshape, "gaussian");
  EXPECT_EQ(back.meta.at("note"), "fixture");
}
