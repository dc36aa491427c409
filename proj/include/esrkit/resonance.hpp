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
#ifndef ESRKIT_RESONANCE_HPP
#define ESRKIT_RESONANCE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "esrkit/hermitian_eig.hpp"
#include "esrkit/spin_operators.hpp"

namespace esrkit {

/// One field position where a level gap crosses the microwave frequency.
struct Resonance {
  double field_t;
  double intensity;             ///< |<i| Sx |j>|^2 at the resonance field
  int from;                     ///< lower eigenstate index (ascending order)
  int to;                       ///< upper eigenstate index
  std::vector<double> levels;   ///< all eigenvalues at field_t, GHz
};

struct ResonanceOptions {
  /// Uniform bracketing mesh across the field range. Level gaps of the
  /// systems handled here vary by tens of GHz per tesla, so the default
  /// isolates crossings at sub-millitesla resolution.
  int mesh_points = 2000;
  double bisect_tol_t = 1e-7;
};

namespace detail {

// Gap evaluation strategy. Eigenvalues along the field axis come from
// H(B) = H0 + B*Hz with H0 and Hz fixed per orientation; dimensions 2 and 3
// use the analytic Hermitian eigenvalue paths.
template <typename Matrix>
struct PencilEigvals {
  Matrix h0, hz;
  mutable Matrix work;

  PencilEigvals(const Eigen::MatrixXcd& h0_in, const Eigen::MatrixXcd& hz_in)
      : h0(h0_in), hz(hz_in), work(h0_in) {}

  void operator()(double field_t, double* ev) const {
    work = h0;
    work.noalias() += field_t * hz;
    if constexpr (Matrix::RowsAtCompileTime == 2) {
      hermitian_eigenvalues_2(work, ev);
    } else if constexpr (Matrix::RowsAtCompileTime == 3) {
      hermitian_eigenvalues_3(work, ev);
    } else {
      hermitian_eigenvalues(work, ev);
    }
  }
};

template <typename EigFn>
inline void scan_resonances(const EigFn& eigvals, int dim, double nu_mw_ghz, double b_min,
                            double b_max, const ResonanceOptions& opt,
                            std::vector<std::pair<double, std::pair<int, int>>>& roots) {
  const int mesh = std::max(opt.mesh_points, 2);
  const double step = (b_max - b_min) / (mesh - 1);
  std::vector<double> table(static_cast<std::size_t>(mesh) * dim);
  std::vector<double> ev(dim);
  for (int k = 0; k < mesh; ++k) {
    eigvals(b_min + k * step, ev.data());
    std::copy(ev.begin(), ev.end(), table.begin() + static_cast<std::size_t>(k) * dim);
  }
  const auto gap_at = [&](int k, int i, int j) {
    const double* row = table.data() + static_cast<std::size_t>(k) * dim;
    return row[j] - row[i] - nu_mw_ghz;
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const auto gap = [&](double b) {
        eigvals(b, ev.data());
        return ev[j] - ev[i] - nu_mw_ghz;
      };
      for (int k = 0; k < mesh; ++k) {
        const double fk = gap_at(k, i, j);
        if (fk == 0.0) {
          roots.push_back({b_min + k * step, {i, j}});
          continue;
        }
        if (k + 1 >= mesh) continue;
        const double fk1 = gap_at(k + 1, i, j);
        if (fk1 == 0.0 || fk * fk1 >= 0.0) continue;
        double lo = b_min + k * step;
        double hi = lo + step;
        double flo = fk;
        while (hi - lo > opt.bisect_tol_t) {
          const double mid = 0.5 * (lo + hi);
          const double fm = gap(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        roots.push_back({0.5 * (lo + hi), {i, j}});
      }
    }
  }
}

}  // namespace detail

/// All fields in [b_min_t, b_max_t] where a transition (i, j) of the system,
/// with the static field along dir, matches the microwave frequency. Each
/// level-gap branch is sampled on a uniform mesh and every sign change of
/// (gap - nu) is refined by bisection. An empty result is a valid outcome.
inline std::vector<Resonance> resonance_fields(const SpinSystem& sys, const Orientation& dir,
                                               double nu_mw_ghz, double b_min_t, double b_max_t,
                                               const ResonanceOptions& opt = {}) {
  if (!(b_min_t >= 0.0)) throw std::invalid_argument("resonance_fields: Bmin must be >= 0");
  if (!(b_max_t > b_min_t))
    throw std::invalid_argument("resonance_fields: field range must be non-empty");
  if (!(nu_mw_ghz > 0.0))
    throw std::invalid_argument("resonance_fields: microwave frequency must be positive");

  const SpinOperators ops = spin_operators(sys.spin);
  const int dim = ops.dim();
  const auto n = dir.unit_vector();
  Eigen::MatrixXcd h0 = sys.d_ghz * (ops.sz * ops.sz);
  h0 += sys.e_ghz * (ops.sx * ops.sx - ops.sy * ops.sy);
  const Eigen::MatrixXcd hz =
      sys.g * constants::mu_bohr_ghz_per_t * (n[0] * ops.sx + n[1] * ops.sy + n[2] * ops.sz);

  std::vector<std::pair<double, std::pair<int, int>>> roots;
  if (dim == 2) {
    detail::PencilEigvals<Eigen::Matrix2cd> eig(h0, hz);
    detail::scan_resonances(eig, dim, nu_mw_ghz, b_min_t, b_max_t, opt, roots);
  } else if (dim == 3) {
    detail::PencilEigvals<Eigen::Matrix3cd> eig(h0, hz);
    detail::scan_resonances(eig, dim, nu_mw_ghz, b_min_t, b_max_t, opt, roots);
  } else {
    detail::PencilEigvals<Eigen::MatrixXcd> eig(h0, hz);
    detail::scan_resonances(eig, dim, nu_mw_ghz, b_min_t, b_max_t, opt, roots);
  }

  std::vector<Resonance> result;
  result.reserve(roots.size());
  for (const auto& [field, pair] : roots) {
    const Eigen::MatrixXcd h = h0 + field * hz;
    const Eigensystem es = eigensystem(h);
    const Eigen::MatrixXcd sx_eig = es.vectors.adjoint() * ops.sx * es.vectors;
    Resonance res;
    res.field_t = field;
    res.from = pair.first;
    res.to = pair.second;
    res.intensity = std::norm(sx_eig(pair.first, pair.second));
    res.levels.assign(es.values.data(), es.values.data() + dim);
    result.push_back(std::move(res));
  }
  std::sort(result.begin(), result.end(), [](const Resonance& a, const Resonance& b) {
    if (a.field_t != b.field_t) return a.field_t < b.field_t;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return result;
}

}  // namespace esrkit

#endif  // ESRKIT_RESONANCE_HPP
