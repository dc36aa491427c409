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
#ifndef ESRKIT_BLOCH_HPP
#define ESRKIT_BLOCH_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "esrkit/constants.hpp"
#include "esrkit/eseem.hpp"
#include "esrkit/pulse.hpp"
#include "esrkit/trace.hpp"

namespace esrkit {

/// Rotating-frame propagator of a two-level system under a rectangular
/// pulse: U = exp(-i*(delta*sz/2 + w1*(cos(phi)*sx + sin(phi)*sy)/2)*t),
/// evaluated in closed form. Unitary by construction.
inline Eigen::Matrix2cd pulse_propagator(const Pulse& pulse, double detuning_mhz) {
  const double w1 = constants::two_pi * 1e-3 * pulse.rabi_frequency_mhz();  // rad/ns
  const double dz = constants::two_pi * 1e-3 * detuning_mhz;
  const double omega = std::hypot(w1, dz);
  const double half = 0.5 * omega * pulse.duration_ns;
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  if (omega == 0.0) return u;
  const double nx = w1 * std::cos(pulse.phase_rad) / omega;
  const double ny = w1 * std::sin(pulse.phase_rad) / omega;
  const double nz = dz / omega;
  const std::complex<double> i(0.0, 1.0);
  const double c = std::cos(half);
  const double s = std::sin(half);
  u(0, 0) = c - i * s * nz;
  u(0, 1) = -i * s * (nx - i * ny);
  u(1, 0) = -i * s * (nx + i * ny);
  u(1, 1) = c + i * s * nz;
  return u;
}

namespace detail {

inline Eigen::Matrix3d rotation_about(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double x = axis[0], y = axis[1], z = axis[2];
  const double omc = 1.0 - c;
  r << c + x * x * omc, x * y * omc - z * s, x * z * omc + y * s,
       y * x * omc + z * s, c + y * y * omc, y * z * omc - x * s,
       z * x * omc - y * s, z * y * omc + x * s, c + z * z * omc;
  return r;
}

}  // namespace detail

/// Bloch-sphere rotation equivalent to pulse_propagator: right-hand rotation
/// about (w1*cos(phi), w1*sin(phi), delta)/Omega by Omega*t.
inline Eigen::Matrix3d pulse_rotation(const Pulse& pulse, double detuning_mhz) {
  const double w1 = constants::two_pi * 1e-3 * pulse.rabi_frequency_mhz();
  const double dz = constants::two_pi * 1e-3 * detuning_mhz;
  const double omega = std::hypot(w1, dz);
  if (omega == 0.0) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d axis(w1 * std::cos(pulse.phase_rad) / omega,
                             w1 * std::sin(pulse.phase_rad) / omega, dz / omega);
  return detail::rotation_about(axis, omega * pulse.duration_ns);
}

/// Free precession about +z at the detuning plus phenomenological damping:
/// transverse components decay with T2, the longitudinal component recovers
/// toward equilibrium +1 with T1.
inline Eigen::Vector3d free_evolution(const Eigen::Vector3d& m, double delay_ns,
                                      double detuning_mhz, const RelaxationParams& relax) {
  if (!(delay_ns >= 0.0)) throw std::invalid_argument("free_evolution: delay must be >= 0");
  if (!(m.norm() <= 1.0 + 1e-9))
    throw std::invalid_argument("free_evolution: Bloch vector norm exceeds 1");
  const double angle = constants::two_pi * 1e-3 * detuning_mhz * delay_ns;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double e2 = std::exp(-delay_ns / relax.t2_ns);
  const double e1 = std::exp(-delay_ns / relax.t1_ns);
  Eigen::Vector3d out;
  out[0] = (m[0] * c - m[1] * s) * e2;
  out[1] = (m[0] * s + m[1] * c) * e2;
  out[2] = 1.0 + (m[2] - 1.0) * e1;
  return out;
}

struct RunOptions {
  /// Treat pulses as instantaneous nominal rotations (delta pulses). Pair
  /// with sequences built with ideal_timing.
  bool ideal_pulses = false;
  int pulse_substeps = 64;
  int delay_substeps = 256;
  int window_substeps = 128;
  /// Sampling is refined (all substep counts doubled) until the detected
  /// echo amplitude changes by less than this.
  double echo_convergence = 1e-6;
  int max_refinements = 5;
};

/// Window integral of a time trace: mean over [center - w/2, center + w/2]
/// by trapezoid rule, or the interpolated point sample for a zero width.
inline double detect(const Trace& trace, const DetectionWindow& window) {
  const auto& t = trace.axis;
  const auto& y = trace.amplitude;
  if (t.size() < 2) throw std::invalid_argument("detect: trace too short");
  const auto sample_at = [&](double when) {
    auto it = std::lower_bound(t.begin(), t.end(), when);
    if (it == t.begin()) return y.front();
    if (it == t.end()) return y.back();
    const std::size_t hi = static_cast<std::size_t>(it - t.begin());
    const std::size_t lo = hi - 1;
    const double span = t[hi] - t[lo];
    if (span <= 0.0) return y[lo];
    const double f = (when - t[lo]) / span;
    return (1.0 - f) * y[lo] + f * y[hi];
  };
  if (window.width_ns <= 0.0) return sample_at(window.center_ns);
  const double lo = window.center_ns - 0.5 * window.width_ns;
  const double hi = window.center_ns + 0.5 * window.width_ns;
  auto first = std::lower_bound(t.begin(), t.end(), lo);
  auto last = std::upper_bound(t.begin(), t.end(), hi);
  std::vector<double> xs, ys;
  xs.push_back(lo);
  ys.push_back(sample_at(lo));
  for (auto it = first; it != last; ++it) {
    const std::size_t idx = static_cast<std::size_t>(it - t.begin());
    if (t[idx] > lo && t[idx] < hi) {
      xs.push_back(t[idx]);
      ys.push_back(y[idx]);
    }
  }
  xs.push_back(hi);
  ys.push_back(sample_at(hi));
  double integral = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    integral += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
  return integral / window.width_ns;
}

namespace detail {

struct Segment {
  bool is_pulse;
  double start_ns;
  double duration_ns;  // 0 for ideal pulses
  const Pulse* pulse;  // valid when is_pulse
};

struct SequenceLayout {
  std::vector<Segment> segments;
  double span_ns;
  double tau_ns = 0.0;       // first-to-second pulse center separation
  int pulses = 0;
};

inline SequenceLayout layout_sequence(const PulseSequence& seq, bool ideal) {
  SequenceLayout lay;
  double t = 0.0;
  std::vector<double> centers;
  for (const auto& el : seq.elements) {
    if (const Pulse* p = std::get_if<Pulse>(&el)) {
      const double d = ideal ? 0.0 : p->duration_ns;
      centers.push_back(t + 0.5 * d);
      lay.segments.push_back({true, t, d, p});
      t += d;
      ++lay.pulses;
    } else {
      const double d = std::get<Delay>(el).duration_ns;
      lay.segments.push_back({false, t, d, nullptr});
      t += d;
    }
  }
  lay.span_ns = t;
  if (centers.size() >= 2) lay.tau_ns = centers[1] - centers[0];
  return lay;
}

}  // namespace detail

/// Ensemble-averaged transverse signal versus time for a pulse sequence.
///
/// Each ensemble member is a Bloch vector starting at equilibrium (0,0,1)
/// with its own static detuning; pulses rotate it (relaxation during pulses
/// is neglected, pulse durations being far shorter than T2), delays apply
/// damped precession, and the detected signal is the ensemble mean of M_y.
/// With an ESEEM model attached and a two-pulse sequence, the signal is
/// multiplied by the weak-coupling echo-shape modulation.
///
/// Returned meta carries echo_time_ns and echo_amplitude (the detection
/// window integral).
inline Trace run_sequence(const PulseSequence& seq, const DetuningEnsemble& ensemble,
                          const RelaxationParams& relax, const EseemModel* eseem = nullptr,
                          const RunOptions& opt = {}) {
  seq.validate();
  if (seq.ideal_timing && !opt.ideal_pulses)
    throw std::invalid_argument("run_sequence: ideal_timing sequence needs ideal_pulses");
  const detail::SequenceLayout lay = detail::layout_sequence(seq, opt.ideal_pulses);
  const std::vector<double> offsets = ensemble.offsets_mhz();

  const bool apply_eseem = eseem != nullptr && !eseem->nuclei.empty() && lay.pulses == 2;

  int pulse_steps = opt.pulse_substeps;
  int delay_steps = opt.delay_substeps;
  int window_steps = opt.window_substeps;

  Trace trace;
  double previous_amp = std::numeric_limits<double>::quiet_NaN();
  for (int refinement = 0; refinement <= opt.max_refinements; ++refinement) {
    // Sample instants: uniform per segment, plus the detection window.
    std::vector<double> times;
    times.push_back(0.0);
    for (const auto& segment : lay.segments) {
      if (segment.duration_ns <= 0.0) continue;
      const int steps = segment.is_pulse ? pulse_steps : delay_steps;
      for (int k = 1; k <= steps; ++k)
        times.push_back(segment.start_ns + segment.duration_ns * k / steps);
    }
    times.push_back(seq.detection.center_ns);
    if (seq.detection.width_ns > 0.0) {
      for (int k = 0; k <= window_steps; ++k)
        times.push_back(seq.detection.center_ns +
                        seq.detection.width_ns * (static_cast<double>(k) / window_steps - 0.5));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                times.end());
    while (!times.empty() && times.back() > lay.span_ns + 1e-9) times.pop_back();

    std::vector<double> signal(times.size(), 0.0);
    for (double detuning : offsets) {
      Eigen::Vector3d m(0.0, 0.0, 1.0);
      std::size_t cursor = 0;
      // samples at t = 0 (before any pulse)
      while (cursor < times.size() && times[cursor] <= 0.0) {
        signal[cursor] += m[1];
        ++cursor;
      }
      for (const auto& segment : lay.segments) {
        const double end = segment.start_ns + segment.duration_ns;
        if (segment.is_pulse && opt.ideal_pulses) {
          const Eigen::Vector3d axis(std::cos(segment.pulse->phase_rad),
                                     std::sin(segment.pulse->phase_rad), 0.0);
          m = detail::rotation_about(axis, segment.pulse->nominal_angle_rad) * m;
          continue;
        }
        if (segment.is_pulse) {
          const double w1 = constants::two_pi * 1e-3 * segment.pulse->rabi_frequency_mhz();
          const double dz = constants::two_pi * 1e-3 * detuning;
          const double omega = std::hypot(w1, dz);
          Eigen::Vector3d axis(1.0, 0.0, 0.0);
          if (omega > 0.0)
            axis = Eigen::Vector3d(w1 * std::cos(segment.pulse->phase_rad) / omega,
                                   w1 * std::sin(segment.pulse->phase_rad) / omega, dz / omega);
          while (cursor < times.size() && times[cursor] <= end + 1e-12) {
            const double dt = times[cursor] - segment.start_ns;
            const Eigen::Vector3d at = detail::rotation_about(axis, omega * dt) * m;
            signal[cursor] += at[1];
            ++cursor;
          }
          m = detail::rotation_about(axis, omega * segment.duration_ns) * m;
        } else {
          while (cursor < times.size() && times[cursor] <= end + 1e-12) {
            const double dt = times[cursor] - segment.start_ns;
            const Eigen::Vector3d at = free_evolution(m, dt, detuning, relax);
            signal[cursor] += at[1];
            ++cursor;
          }
          m = free_evolution(m, segment.duration_ns, detuning, relax);
        }
      }
      while (cursor < times.size()) {
        signal[cursor] += m[1];
        ++cursor;
      }
    }
    for (double& v : signal) v /= static_cast<double>(offsets.size());

    if (apply_eseem) {
      for (std::size_t i = 0; i < times.size(); ++i)
        signal[i] *= two_pulse_modulation_shape(*eseem, lay.tau_ns,
                                                times[i] - seq.detection.center_ns);
    }

    trace = Trace::make(AxisKind::time_ns, times, signal);
    const double amp = detect(trace, seq.detection);
    trace.meta["echo_time_ns"] = detail::format_g12(seq.detection.center_ns);
    trace.meta["echo_amplitude"] = detail::format_g12(amp);
    if (lay.tau_ns > 0.0) trace.meta["tau_ns"] = detail::format_g12(lay.tau_ns);

    if (refinement > 0 && std::abs(amp - previous_amp) < opt.echo_convergence) break;
    previous_amp = amp;
    pulse_steps *= 2;
    delay_steps *= 2;
    window_steps *= 2;
  }
  return trace;
}

/// Detection-window amplitude of the sequence's echo.
inline double echo_amplitude(const PulseSequence& seq, const DetuningEnsemble& ensemble,
                             const RelaxationParams& relax, const EseemModel* eseem = nullptr,
                             const RunOptions& opt = {}) {
  const Trace trace = run_sequence(seq, ensemble, relax, eseem, opt);
  return detect(trace, seq.detection);
}

/// Width of the detuning response of a single pulse applied to equilibrium,
/// converted to field units: FWHM of |M_y| versus detuning, divided by
/// g*(mu_B/h). Long pulses excite narrow windows.
inline double excitation_profile_fwhm_mt(const Pulse& pulse, double g) {
  if (!(g > 0.0)) throw std::invalid_argument("excitation_profile: g must be positive");
  const auto response = [&](double detuning_mhz) {
    const Eigen::Vector3d m = pulse_rotation(pulse, detuning_mhz) * Eigen::Vector3d(0, 0, 1);
    return std::abs(m[1]);
  };
  const double f1 = pulse.rabi_frequency_mhz();
  const double span = 50.0 * f1;
  const int scan_points = 4000;
  double peak = 0.0;
  int peak_idx = 0;
  std::vector<double> values(scan_points);
  for (int k = 0; k < scan_points; ++k) {
    values[k] = response(span * k / (scan_points - 1));
    if (values[k] > peak) {
      peak = values[k];
      peak_idx = k;
    }
  }
  if (peak <= 0.0) return 0.0;
  const double half = 0.5 * peak;
  int k = peak_idx;
  while (k + 1 < scan_points && values[k + 1] >= half) ++k;
  if (k + 1 >= scan_points)
    throw std::runtime_error("excitation_profile: half maximum not bracketed");
  double lo = span * k / (scan_points - 1);
  double hi = span * (k + 1) / (scan_points - 1);
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (response(mid) >= half)
      lo = mid;
    else
      hi = mid;
  }
  const double half_width_mhz = 0.5 * (lo + hi) - span * peak_idx / (scan_points - 1);
  const double fwhm_mhz = 2.0 * half_width_mhz;
  return fwhm_mhz / (g * constants::mu_bohr_ghz_per_t);  // MHz/(GHz/T) = mT
}

}  // namespace esrkit

#endif  // ESRKIT_BLOCH_HPP
