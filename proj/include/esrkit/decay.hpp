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
#ifndef ESRKIT_DECAY_HPP
#define ESRKIT_DECAY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "esrkit/eseem.hpp"
#include "esrkit/pulse.hpp"
#include "esrkit/trace.hpp"

namespace esrkit {

/// Two-pulse echo amplitude versus delay:
///   amplitude(tau) = A * exp(-2*tau/T2) * V(tau)
/// with V the nuclear modulation (1 when absent). The factor 2 reflects the
/// total dephasing-plus-refocusing time 2*tau; T2 values quoted by this
/// library follow that convention.
inline Trace hahn_decay_curve(const std::vector<double>& tau_list_ns,
                              const RelaxationParams& relax,
                              const EseemModel* eseem = nullptr, double amplitude = 1.0) {
  if (tau_list_ns.empty()) throw std::invalid_argument("hahn_decay_curve: empty tau list");
  if (!(tau_list_ns.front() >= 0.0))
    throw std::invalid_argument("hahn_decay_curve: tau values must be >= 0");
  for (std::size_t i = 1; i < tau_list_ns.size(); ++i)
    if (!(tau_list_ns[i] > tau_list_ns[i - 1]))
      throw std::invalid_argument("hahn_decay_curve: tau list must be ascending");

  std::vector<double> amp(tau_list_ns.size());
  for (std::size_t i = 0; i < tau_list_ns.size(); ++i) {
    double v = 1.0;
    if (eseem != nullptr) v = two_pulse_modulation(*eseem, tau_list_ns[i]);
    amp[i] = amplitude * std::exp(-2.0 * tau_list_ns[i] / relax.t2_ns) * v;
  }
  Trace trace = Trace::make(AxisKind::delay_ns, tau_list_ns, std::move(amp));
  trace.meta["T2_ns"] = detail::format_g12(relax.t2_ns);
  return trace;
}

/// Echo-detected magnetization recovery after an inversion pulse:
///   M(T) = M_inf * (1 - 2*f*exp(-T/T1)) * exp(-2*tau_fixed/T2)
/// with f the inversion efficiency.
inline Trace inversion_recovery_curve(const std::vector<double>& recovery_list_ns,
                                      const RelaxationParams& relax, double tau_fixed_ns,
                                      double inversion_efficiency = 1.0,
                                      double m_inf = 1.0) {
  if (recovery_list_ns.empty())
    throw std::invalid_argument("inversion_recovery_curve: empty recovery list");
  if (!(recovery_list_ns.front() >= 0.0))
    throw std::invalid_argument("inversion_recovery_curve: recovery times must be >= 0");
  for (std::size_t i = 1; i < recovery_list_ns.size(); ++i)
    if (!(recovery_list_ns[i] > recovery_list_ns[i - 1]))
      throw std::invalid_argument("inversion_recovery_curve: recovery list must be ascending");
  if (!(inversion_efficiency > 0.0 && inversion_efficiency <= 1.0))
    throw std::invalid_argument("inversion_recovery_curve: efficiency must lie in (0, 1]");
  if (!(tau_fixed_ns >= 0.0))
    throw std::invalid_argument("inversion_recovery_curve: tau_fixed must be >= 0");

  const double echo_factor = std::exp(-2.0 * tau_fixed_ns / relax.t2_ns);
  std::vector<double> amp(recovery_list_ns.size());
  for (std::size_t i = 0; i < recovery_list_ns.size(); ++i)
    amp[i] = m_inf *
             (1.0 - 2.0 * inversion_efficiency * std::exp(-recovery_list_ns[i] / relax.t1_ns)) *
             echo_factor;
  Trace trace = Trace::make(AxisKind::recovery_ns, recovery_list_ns, std::move(amp));
  trace.meta["T1_ns"] = detail::format_g12(relax.t1_ns);
  trace.meta["tau_fixed_ns"] = detail::format_g12(tau_fixed_ns);
  return trace;
}

}  // namespace esrkit

#endif  // ESRKIT_DECAY_HPP
