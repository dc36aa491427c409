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
#ifndef ESRKIT_PULSE_HPP
#define ESRKIT_PULSE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "esrkit/constants.hpp"
#include "esrkit/mathutil.hpp"

namespace esrkit {

/// A rectangular microwave pulse. The Rabi frequency is derived from the
/// nominal flip angle and duration, so the triple stays consistent.
struct Pulse {
  double duration_ns;
  double nominal_angle_rad;
  double phase_rad;

  Pulse(double duration, double angle, double phase = 0.0)
      : duration_ns(duration), nominal_angle_rad(angle), phase_rad(phase) {
    if (!(duration_ns > 0.0)) throw std::invalid_argument("Pulse: duration must be positive");
    if (!(nominal_angle_rad > 0.0))
      throw std::invalid_argument("Pulse: nominal angle must be positive");
    if (!std::isfinite(phase_rad)) throw std::invalid_argument("Pulse: non-finite phase");
  }

  double rabi_frequency_mhz() const {
    return nominal_angle_rad / (constants::two_pi * duration_ns) * 1e3;
  }

  static Pulse pi_half(double duration_ns, double phase = 0.0) {
    return Pulse(duration_ns, constants::pi / 2.0, phase);
  }
  static Pulse pi(double duration_ns, double phase = 0.0) {
    return Pulse(duration_ns, constants::pi, phase);
  }
};

struct Delay {
  double duration_ns;
  explicit Delay(double duration) : duration_ns(duration) {
    if (!(duration_ns >= 0.0)) throw std::invalid_argument("Delay: duration must be >= 0");
  }
};

using SequenceElement = std::variant<Pulse, Delay>;

struct DetectionWindow {
  double center_ns = 0.0;
  double width_ns = 0.0;  ///< 0 means point sampling at the center
};

/// Ordered pulses and delays plus the echo detection window.
///
/// The factories place the detection window at the refocusing time. Two
/// timing conventions are supported: finite pulses occupying their stated
/// durations (echoes refocus at twice the pulse-center separation), or the
/// delta-pulse idealization where pulses take no time and the Hahn echo sits
/// exactly at 2*tau. The latter must be paired with ideal-pulse propagation.
struct PulseSequence {
  std::vector<SequenceElement> elements;
  DetectionWindow detection;
  bool ideal_timing = false;

  int pulse_count() const {
    int n = 0;
    for (const auto& el : elements)
      if (std::holds_alternative<Pulse>(el)) ++n;
    return n;
  }

  double span_ns() const {
    double t = 0.0;
    for (const auto& el : elements) {
      if (const Pulse* p = std::get_if<Pulse>(&el))
        t += ideal_timing ? 0.0 : p->duration_ns;
      else
        t += std::get<Delay>(el).duration_ns;
    }
    return t;
  }

  void validate() const {
    if (pulse_count() < 1)
      throw std::invalid_argument("PulseSequence: at least one pulse required");
    const double span = span_ns();
    const double lo = detection.center_ns - 0.5 * detection.width_ns;
    const double hi = detection.center_ns + 0.5 * detection.width_ns;
    if (!(lo >= 0.0 && hi <= span + 1e-9))
      throw std::invalid_argument("PulseSequence: detection window outside the simulated span");
  }

  /// p90 - tau - p180 - tau - echo.
  static PulseSequence hahn(const Pulse& p90, const Pulse& p180, double tau_ns,
                            double window_ns = 0.0, bool ideal_timing = false) {
    if (!(tau_ns > 0.0)) throw std::invalid_argument("hahn: tau must be positive");
    PulseSequence seq;
    seq.ideal_timing = ideal_timing;
    const double d90 = ideal_timing ? 0.0 : p90.duration_ns;
    const double d180 = ideal_timing ? 0.0 : p180.duration_ns;
    const double c1 = 0.5 * d90;
    const double c2 = d90 + tau_ns + 0.5 * d180;
    const double t_echo = 2.0 * c2 - c1;
    const double end180 = d90 + tau_ns + d180;
    const double tail = (t_echo - end180) + 0.5 * window_ns + 0.5 * tau_ns;
    seq.elements = {p90, Delay(tau_ns), p180, Delay(tail)};
    seq.detection = {t_echo, window_ns};
    seq.validate();
    return seq;
  }

  /// p_inv - T - p90 - tau - p180 - tau - echo.
  static PulseSequence inversion_recovery(const Pulse& p_inv, const Pulse& p90,
                                          const Pulse& p180, double recovery_ns, double tau_ns,
                                          double window_ns = 0.0, bool ideal_timing = false) {
    if (!(recovery_ns >= 0.0))
      throw std::invalid_argument("inversion_recovery: recovery delay must be >= 0");
    if (!(tau_ns > 0.0)) throw std::invalid_argument("inversion_recovery: tau must be positive");
    PulseSequence seq;
    seq.ideal_timing = ideal_timing;
    const double dinv = ideal_timing ? 0.0 : p_inv.duration_ns;
    const double d90 = ideal_timing ? 0.0 : p90.duration_ns;
    const double d180 = ideal_timing ? 0.0 : p180.duration_ns;
    const double c90 = dinv + recovery_ns + 0.5 * d90;
    const double c180 = dinv + recovery_ns + d90 + tau_ns + 0.5 * d180;
    const double t_echo = 2.0 * c180 - c90;
    const double end180 = dinv + recovery_ns + d90 + tau_ns + d180;
    const double tail = (t_echo - end180) + 0.5 * window_ns + 0.5 * tau_ns;
    seq.elements = {p_inv, Delay(recovery_ns), p90, Delay(tau_ns), p180, Delay(tail)};
    seq.detection = {t_echo, window_ns};
    seq.validate();
    return seq;
  }
};

/// Phenomenological longitudinal/transverse relaxation times. The bound
/// T1 >= T2/2 keeps Bloch dynamics inside the unit ball.
struct RelaxationParams {
  double t1_ns;
  double t2_ns;

  RelaxationParams(double t1, double t2) : t1_ns(t1), t2_ns(t2) {
    if (!(t2_ns > 0.0)) throw std::invalid_argument("RelaxationParams: T2 must be positive");
    if (!(t1_ns >= 0.5 * t2_ns))
      throw std::invalid_argument("RelaxationParams: physicality bound T1 >= T2/2 violated");
  }

  static RelaxationParams none() {
    const double inf = std::numeric_limits<double>::infinity();
    return RelaxationParams(inf, inf);
  }
};

/// Deterministic Gaussian detuning ensemble: the offsets are the standard
/// normal quantiles at midpoint ranks, scaled by sigma. count = 1 yields a
/// single on-center spin.
struct DetuningEnsemble {
  double sigma_mhz;
  int count;

  DetuningEnsemble(double sigma, int n) : sigma_mhz(sigma), count(n) {
    if (!(sigma_mhz >= 0.0))
      throw std::invalid_argument("DetuningEnsemble: sigma must be >= 0");
    if (count < 1) throw std::invalid_argument("DetuningEnsemble: need at least one sample");
  }

  std::vector<double> offsets_mhz() const {
    std::vector<double> out(count);
    if (sigma_mhz == 0.0) return out;
    for (int i = 0; i < count; ++i)
      out[i] = sigma_mhz * normal_quantile((i + 0.5) / static_cast<double>(count));
    return out;
  }
};

}  // namespace esrkit

#endif  // ESRKIT_PULSE_HPP
