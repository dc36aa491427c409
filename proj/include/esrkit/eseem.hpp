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
#ifndef ESRKIT_ESEEM_HPP
#define ESRKIT_ESEEM_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "esrkit/constants.hpp"
#include "esrkit/json_util.hpp"
#include "esrkit/trace.hpp"

namespace esrkit {

/// One nuclear species weakly coupled to the electron spin. The modulation
/// depth k is phenomenological; the modulation frequency is the nuclear
/// Zeeman frequency gamma*B.
struct NuclearCoupling {
  std::string isotope;        ///< "1H", "2H", or empty for a custom gamma
  double gamma_mhz_per_t;     ///< gyromagnetic ratio gamma/2pi
  double spin_i;              ///< nuclear spin quantum number, 1/2 or 1
  double k;                   ///< modulation depth in [0, 1]
  bool second_harmonic;       ///< include the k^2/8 overtone term

  NuclearCoupling(double gamma, double spin, double depth, bool overtone,
                  std::string isotope_label = "")
      : isotope(std::move(isotope_label)),
        gamma_mhz_per_t(gamma),
        spin_i(spin),
        k(depth),
        second_harmonic(overtone) {
    if (!(gamma_mhz_per_t > 0.0))
      throw std::invalid_argument("NuclearCoupling: gamma must be positive");
    if (!(spin_i == 0.5 || spin_i == 1.0))
      throw std::invalid_argument("NuclearCoupling: spin_I must be 1/2 or 1");
    if (!(k >= 0.0 && k <= 1.0))
      throw std::invalid_argument("NuclearCoupling: modulation depth k must lie in [0, 1]");
  }

  static NuclearCoupling from_isotope(const std::string& name, double depth,
                                      bool overtone = false) {
    if (name == "1H")
      return NuclearCoupling(constants::gamma_1h_mhz_per_t, 0.5, depth, overtone, name);
    if (name == "2H")
      return NuclearCoupling(constants::gamma_2h_mhz_per_t, 1.0, depth, overtone, name);
    throw std::invalid_argument("NuclearCoupling: unknown isotope '" + name + "'");
  }
};

/// Nuclear modulation model at a given static field.
struct EseemModel {
  std::vector<NuclearCoupling> nuclei;
  double field_t = 0.38988;

  EseemModel() = default;
  EseemModel(std::vector<NuclearCoupling> nuclei_, double field)
      : nuclei(std::move(nuclei_)), field_t(field) {
    if (!(field_t > 0.0)) throw std::invalid_argument("EseemModel: field must be positive");
  }
};

/// Nuclear Zeeman frequency gamma*B in MHz.
inline double larmor_frequency_mhz(double gamma_mhz_per_t, double field_t) {
  if (!(field_t >= 0.0)) throw std::invalid_argument("larmor_frequency: field must be >= 0");
  return gamma_mhz_per_t * field_t;
}

/// gamma(1H)/gamma(2H), about 6.5.
inline double gamma_ratio() {
  return constants::gamma_1h_mhz_per_t / constants::gamma_2h_mhz_per_t;
}

/// Two-pulse echo modulation V(tau), weak-coupling limit: per nucleus
///   V_n = 1 - (k/2)(1 - cos w tau) - (k^2/8)(1 - cos 2 w tau)
/// with the overtone term only when second_harmonic is set, and the total
/// the product over nuclei. Stays within [0, 1] for k in [0, 1].
inline double two_pulse_modulation(const EseemModel& model, double tau_ns) {
  if (!(tau_ns >= 0.0)) throw std::invalid_argument("two_pulse_modulation: tau must be >= 0");
  double v = 1.0;
  for (const auto& nuc : model.nuclei) {
    const double omega =
        constants::two_pi * 1e-3 * larmor_frequency_mhz(nuc.gamma_mhz_per_t, model.field_t);
    double vn = 1.0 - 0.5 * nuc.k * (1.0 - std::cos(omega * tau_ns));
    if (nuc.second_harmonic)
      vn -= 0.125 * nuc.k * nuc.k * (1.0 - std::cos(2.0 * omega * tau_ns));
    v *= vn;
  }
  return v;
}

/// Echo-shape variant used when sampling the echo away from its center:
/// the modulated terms carry the coherence-transfer phase cos(w*(t-t_echo)),
/// so integrating the echo over a window much wider than 1/frequency washes
/// the tau dependence out while a point sample at the center retains it.
inline double two_pulse_modulation_shape(const EseemModel& model, double tau_ns,
                                         double offset_ns) {
  double v = 1.0;
  for (const auto& nuc : model.nuclei) {
    const double omega =
        constants::two_pi * 1e-3 * larmor_frequency_mhz(nuc.gamma_mhz_per_t, model.field_t);
    double vn =
        1.0 - 0.5 * nuc.k * (1.0 - std::cos(omega * tau_ns) * std::cos(omega * offset_ns));
    if (nuc.second_harmonic)
      vn -= 0.125 * nuc.k * nuc.k *
            (1.0 - std::cos(2.0 * omega * tau_ns) * std::cos(2.0 * omega * offset_ns));
    v *= vn;
  }
  return v;
}

/// exp(-2 tau/T2) * V(tau) sampled on tau_list.
inline Trace modulated_decay(double t2_ns, const EseemModel& model,
                             const std::vector<double>& tau_list_ns) {
  if (!(t2_ns > 0.0)) throw std::invalid_argument("modulated_decay: T2 must be positive");
  for (std::size_t i = 1; i < tau_list_ns.size(); ++i)
    if (!(tau_list_ns[i] > tau_list_ns[i - 1]))
      throw std::invalid_argument("modulated_decay: tau list must be ascending");
  std::vector<double> amp(tau_list_ns.size());
  for (std::size_t i = 0; i < tau_list_ns.size(); ++i)
    amp[i] = std::exp(-2.0 * tau_list_ns[i] / t2_ns) * two_pulse_modulation(model, tau_list_ns[i]);
  Trace trace = Trace::make(AxisKind::delay_ns, tau_list_ns, std::move(amp));
  trace.meta["T2_ns"] = detail::format_g12(t2_ns);
  trace.meta["B_T"] = detail::format_g12(model.field_t);
  return trace;
}

// --- JSON fragment: {"nuclei":[{"isotope":"1H","k":0.6,"second_harmonic":true}],"B_T":0.38988}

inline nlohmann::json to_json(const NuclearCoupling& nuc) {
  nlohmann::json j;
  if (nuc.isotope.empty())
    throw std::invalid_argument("NuclearCoupling: only isotope-tagged couplings serialize");
  j["isotope"] = nuc.isotope;
  j["k"] = nuc.k;
  j["second_harmonic"] = nuc.second_harmonic;
  return j;
}

inline NuclearCoupling nuclear_coupling_from_json(const nlohmann::json& j,
                                                  const std::string& ctx) {
  jsonutil::check_keys(j, {"isotope", "k", "second_harmonic"}, ctx);
  const auto isotope = jsonutil::get_required<std::string>(j, "isotope", ctx);
  const double k = jsonutil::get_required<double>(j, "k", ctx);
  const bool sh = jsonutil::get_or<bool>(j, "second_harmonic", false, ctx);
  try {
    return NuclearCoupling::from_isotope(isotope, k, sh);
  } catch (const std::invalid_argument& e) {
    throw config_error(ctx + ": " + e.what());
  }
}

inline nlohmann::json to_json(const EseemModel& model) {
  nlohmann::json j;
  j["nuclei"] = nlohmann::json::array();
  for (const auto& nuc : model.nuclei) j["nuclei"].push_back(to_json(nuc));
  j["B_T"] = model.field_t;
  return j;
}

inline EseemModel eseem_model_from_json(const nlohmann::json& j, const std::string& ctx) {
  jsonutil::check_keys(j, {"nuclei", "B_T"}, ctx);
  std::vector<NuclearCoupling> nuclei;
  if (j.contains("nuclei")) {
    if (!j.at("nuclei").is_array()) throw config_error(ctx + ": 'nuclei' must be an array");
    std::size_t idx = 0;
    for (const auto& item : j.at("nuclei"))
      nuclei.push_back(nuclear_coupling_from_json(item, ctx + ".nuclei[" + std::to_string(idx++) + "]"));
  }
  const double field = jsonutil::get_or<double>(j, "B_T", 0.38988, ctx);
  try {
    return EseemModel(std::move(nuclei), field);
  } catch (const std::invalid_argument& e) {
    throw config_error(ctx + ": " + e.what());
  }
}

}  // namespace esrkit

#endif  // ESRKIT_ESEEM_HPP
