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
#ifndef ESRKIT_SPECTRUM_HPP
#define ESRKIT_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "esrkit/constants.hpp"
#include "esrkit/orientation.hpp"
#include "esrkit/parallel.hpp"
#include "esrkit/resonance.hpp"
#include "esrkit/trace.hpp"

namespace esrkit {

enum class Lineshape { gaussian, lorentzian };

inline Lineshape lineshape_from_string(const std::string& name) {
  if (name == "gaussian") return Lineshape::gaussian;
  if (name == "lorentzian") return Lineshape::lorentzian;
  throw std::invalid_argument("unknown lineshape '" + name + "'");
}

inline std::string to_string(Lineshape shape) {
  return shape == Lineshape::gaussian ? "gaussian" : "lorentzian";
}

/// Echo-detected field sweep: amplitude versus static field on a uniform
/// ascending axis, peak-normalized to 1.
struct Spectrum {
  std::vector<double> field_t;
  std::vector<double> amplitude;
  double nu_mw_ghz = 0.0;
  int grid_points = 0;
  double sigma_t = 0.0;
  std::string lineshape = "gaussian";
  std::map<std::string, std::string> meta;
};

struct SpectrumOptions {
  Lineshape lineshape = Lineshape::gaussian;
  /// Boltzmann population difference weighting; off by default because the
  /// simulated sweeps are treated as excitation profiles.
  bool population_weighting = false;
  double temperature_k = 4.5;
  int threads = 1;  ///< 0 = hardware concurrency; any value is bit-identical
  ResonanceOptions resonance;
};

inline std::vector<double> uniform_axis(double lo, double hi, int points) {
  if (points < 2) throw std::invalid_argument("uniform_axis: need at least 2 points");
  if (!(hi > lo)) throw std::invalid_argument("uniform_axis: range must be ascending");
  std::vector<double> axis(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) axis[i] = lo + i * step;
  return axis;
}

namespace detail {

inline void require_uniform_ascending(const std::vector<double>& axis) {
  if (axis.size() < 2) throw std::invalid_argument("spectrum axis needs at least 2 points");
  const double step = (axis.back() - axis.front()) / (axis.size() - 1);
  if (!(step > 0.0)) throw std::invalid_argument("spectrum axis must be ascending");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (std::abs((axis[i] - axis[i - 1]) - step) > 1e-6 * step)
      throw std::invalid_argument("spectrum axis must be uniform");
  }
}

inline double population_factor(const Resonance& res, double temperature_k) {
  // (p_from - p_to)/Z over all levels at the resonance field.
  const double beta = 1.0 / (constants::k_boltzmann_ghz_per_k * temperature_k);
  double z = 0.0;
  const double ref = *std::min_element(res.levels.begin(), res.levels.end());
  for (double e : res.levels) z += std::exp(-(e - ref) * beta);
  const double pf = std::exp(-(res.levels[res.from] - ref) * beta) / z;
  const double pt = std::exp(-(res.levels[res.to] - ref) * beta) / z;
  return pf - pt;
}

}  // namespace detail

/// Powder-averaged echo-detected spectrum: every orientation contributes its
/// resonance fields, broadened by the lineshape and weighted by the grid
/// weight and transition intensity. The orientation loop is data-parallel
/// with a deterministic ordered reduction.
inline Spectrum echo_detected_spectrum(const SpinSystem& sys, const OrientationGrid& grid,
                                       double nu_mw_ghz, const std::vector<double>& axis,
                                       double sigma_t, const SpectrumOptions& opt = {}) {
  detail::require_uniform_ascending(axis);
  if (!(sigma_t > 0.0))
    throw std::invalid_argument("echo_detected_spectrum: broadening must be positive");
  if (grid.size() == 0) throw std::invalid_argument("echo_detected_spectrum: empty grid");

  const double b_lo = axis.front();
  const double b_hi = axis.back();
  const double step = (b_hi - b_lo) / (axis.size() - 1);

  std::vector<std::vector<Resonance>> found(grid.size());
  parallel_for_indexed(grid.size(), opt.threads, [&](std::size_t idx) {
    found[idx] =
        resonance_fields(sys, grid.points[idx].direction, nu_mw_ghz, b_lo, b_hi, opt.resonance);
  });

  std::vector<double> amp(axis.size(), 0.0);
  const double inv_two_sigma2 = 0.5 / (sigma_t * sigma_t);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double weight = grid.points[idx].weight;
    for (const Resonance& res : found[idx]) {
      double strength = weight * res.intensity;
      if (opt.population_weighting)
        strength *= detail::population_factor(res, opt.temperature_k);
      if (strength == 0.0) continue;
      if (opt.lineshape == Lineshape::gaussian) {
        // contributions beyond 10 sigma are below double precision relevance
        const double lo = res.field_t - 10.0 * sigma_t;
        const double hi = res.field_t + 10.0 * sigma_t;
        int k0 = static_cast<int>(std::ceil((lo - b_lo) / step));
        int k1 = static_cast<int>(std::floor((hi - b_lo) / step));
        k0 = std::max(k0, 0);
        k1 = std::min(k1, static_cast<int>(axis.size()) - 1);
        for (int k = k0; k <= k1; ++k) {
          const double dx = axis[k] - res.field_t;
          amp[k] += strength * std::exp(-dx * dx * inv_two_sigma2);
        }
      } else {
        const double gamma2 = sigma_t * sigma_t;  // sigma acts as the HWHM
        for (std::size_t k = 0; k < axis.size(); ++k) {
          const double dx = axis[k] - res.field_t;
          amp[k] += strength * gamma2 / (dx * dx + gamma2);
        }
      }
    }
  }

  const double peak = *std::max_element(amp.begin(), amp.end());
  if (peak > 0.0)
    for (double& v : amp) v /= peak;

  Spectrum out;
  out.field_t = axis;
  out.amplitude = std::move(amp);
  out.nu_mw_ghz = nu_mw_ghz;
  out.grid_points = static_cast<int>(grid.size());
  out.sigma_t = sigma_t;
  out.lineshape = to_string(opt.lineshape);
  return out;
}

// --- CSV: two columns (field_T, amplitude) under a '#' key=value header.

inline void write_spectrum_csv(const Spectrum& spec, std::ostream& out) {
  out << "# nu_mw_GHz=" << detail::format_g12(spec.nu_mw_ghz) << "\n";
  out << "# grid_points=" << spec.grid_points << "\n";
  out << "# sigma_T=" << detail::format_g12(spec.sigma_t) << "\n";
  out << "# lineshape=" << spec.lineshape << "\n";
  for (const auto& [key, value] : spec.meta) out << "# " << key << "=" << value << "\n";
  out << "# columns=field_T,amplitude\n";
  for (std::size_t i = 0; i < spec.field_t.size(); ++i)
    out << detail::format_g12(spec.field_t[i]) << "," << detail::format_g12(spec.amplitude[i])
        << "\n";
}

inline void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  write_spectrum_csv(spec, out);
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline Spectrum read_spectrum_csv(std::istream& in, const std::string& label = "<stream>") {
  Spectrum spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "nu_mw_GHz")
        spec.nu_mw_ghz = std::stod(value);
      else if (key == "grid_points")
        spec.grid_points = std::stoi(value);
      else if (key == "sigma_T")
        spec.sigma_t = std::stod(value);
      else if (key == "lineshape")
        spec.lineshape = value;
      else if (key != "columns")
        spec.meta[key] = value;
      continue;
    }
    double x = 0.0, y = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
      throw config_error(label + ":" + std::to_string(lineno) + ": malformed CSV row");
    spec.field_t.push_back(x);
    spec.amplitude.push_back(y);
  }
  if (spec.field_t.empty()) throw config_error(label + ": no data rows");
  return spec;
}

inline Spectrum read_spectrum_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return read_spectrum_csv(in, path);
}

}  // namespace esrkit

#endif  // ESRKIT_SPECTRUM_HPP
