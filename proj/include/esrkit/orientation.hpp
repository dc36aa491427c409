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
#ifndef ESRKIT_ORIENTATION_HPP
#define ESRKIT_ORIENTATION_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "esrkit/constants.hpp"

namespace esrkit {

/// Direction of the static field in the molecular frame.
struct Orientation {
  double theta = 0.0;  ///< polar angle, rad, in [0, pi]
  double phi = 0.0;    ///< azimuthal angle, rad, in [0, 2*pi)

  Orientation() = default;
  Orientation(double theta_rad, double phi_rad) : theta(theta_rad), phi(phi_rad) {
    if (!(theta >= 0.0 && theta <= constants::pi))
      throw std::invalid_argument("Orientation: theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < constants::two_pi))
      throw std::invalid_argument("Orientation: phi must lie in [0, 2*pi)");
  }

  std::array<double, 3> unit_vector() const {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  }
};

/// Weighted directions for powder averaging. Weights are positive and sum
/// to one, so a weighted sum over the grid is an average over the sphere.
struct OrientationGrid {
  struct Node {
    Orientation direction;
    double weight;
  };
  std::vector<Node> points;

  std::size_t size() const { return points.size(); }
};

enum class GridScheme { spiral, product };

inline GridScheme grid_scheme_from_string(const std::string& name) {
  if (name == "spiral") return GridScheme::spiral;
  if (name == "product") return GridScheme::product;
  throw std::invalid_argument("unknown orientation grid scheme '" + name + "'");
}

inline std::string to_string(GridScheme scheme) {
  return scheme == GridScheme::spiral ? "spiral" : "product";
}

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// recurrence. Weights sum to 2.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

}  // namespace detail

/// Builds a deterministic orientation grid with n*n points.
///
/// spiral:  golden-angle spiral, equal weights.
/// product: Gauss-Legendre in cos(theta) times uniform phi, product weights.
inline OrientationGrid make_grid(int n, GridScheme scheme) {
  if (n < 2) throw std::invalid_argument("make_grid: resolution parameter must be >= 2");
  OrientationGrid grid;
  if (scheme == GridScheme::spiral) {
    const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    grid.points.reserve(count);
    const double golden = constants::pi * (3.0 - std::sqrt(5.0));
    const double weight = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
      double phi = std::fmod(static_cast<double>(i) * golden, constants::two_pi);
      if (phi < 0.0) phi += constants::two_pi;
      if (phi >= constants::two_pi) phi = 0.0;
      grid.points.push_back({Orientation(std::acos(z), phi), weight});
    }
  } else {
    std::vector<double> x, w;
    detail::gauss_legendre(n, x, w);
    grid.points.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      const double theta = std::acos(x[i]);
      const double wt = 0.5 * w[i] / static_cast<double>(n);
      for (int j = 0; j < n; ++j) {
        const double phi = constants::two_pi * (j + 0.5) / static_cast<double>(n);
        grid.points.push_back({Orientation(theta, phi), wt});
      }
    }
  }
  return grid;
}

}  // namespace esrkit

#endif  // ESRKIT_ORIENTATION_HPP
