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
#ifndef ESRKIT_SPIN_SYSTEM_HPP
#define ESRKIT_SPIN_SYSTEM_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "esrkit/eseem.hpp"
#include "esrkit/json_util.hpp"

namespace esrkit {

inline bool is_half_integer_spin(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return false;
  const double twice = 2.0 * s;
  return std::abs(twice - std::round(twice)) < 1e-9 && std::round(twice) >= 1.0;
}

/// Effective single-spin description: spin quantum number S, isotropic
/// g-factor, and the zero-field-splitting parameters D and E in GHz.
/// Rhombicity is restricted to the conventional range |E| <= |D|/3.
struct SpinSystem {
  double spin;
  double g;
  double d_ghz;
  double e_ghz;
  std::vector<NuclearCoupling> nuclei;

  SpinSystem(double spin_, double g_, double d, double e,
             std::vector<NuclearCoupling> nuclei_ = {})
      : spin(spin_), g(g_), d_ghz(d), e_ghz(e), nuclei(std::move(nuclei_)) {
    if (!is_half_integer_spin(spin))
      throw std::invalid_argument("SpinSystem: S must be a half-integer >= 1/2");
    if (!(g > 0.0)) throw std::invalid_argument("SpinSystem: g must be positive");
    if (!std::isfinite(d_ghz) || !std::isfinite(e_ghz))
      throw std::invalid_argument("SpinSystem: non-finite ZFS parameter");
    if (std::abs(e_ghz) > std::abs(d_ghz) / 3.0 + 1e-12 * std::abs(d_ghz))
      throw std::invalid_argument("SpinSystem: rhombicity bound |E| <= |D|/3 violated");
  }

  int dim() const { return static_cast<int>(std::lround(2.0 * spin)) + 1; }
};

// JSON document: {"S": 1, "g": 1.9, "D_GHz": 21.0, "E_GHz": 1.9, "nuclei": [...]}

inline nlohmann::json to_json(const SpinSystem& sys) {
  nlohmann::json j;
  j["S"] = sys.spin;
  j["g"] = sys.g;
  j["D_GHz"] = sys.d_ghz;
  j["E_GHz"] = sys.e_ghz;
  j["nuclei"] = nlohmann::json::array();
  for (const auto& nuc : sys.nuclei) j["nuclei"].push_back(to_json(nuc));
  return j;
}

inline SpinSystem spin_system_from_json(const nlohmann::json& j,
                                        const std::string& ctx = "system") {
  jsonutil::check_keys(j, {"S", "g", "D_GHz", "E_GHz", "nuclei"}, ctx);
  const double spin = jsonutil::get_required<double>(j, "S", ctx);
  const double g = jsonutil::get_required<double>(j, "g", ctx);
  const double d = jsonutil::get_or<double>(j, "D_GHz", 0.0, ctx);
  const double e = jsonutil::get_or<double>(j, "E_GHz", 0.0, ctx);
  std::vector<NuclearCoupling> nuclei;
  if (j.contains("nuclei")) {
    if (!j.at("nuclei").is_array()) throw config_error(ctx + ": 'nuclei' must be an array");
    std::size_t idx = 0;
    for (const auto& item : j.at("nuclei"))
      nuclei.push_back(
          nuclear_coupling_from_json(item, ctx + ".nuclei[" + std::to_string(idx++) + "]"));
  }
  try {
    return SpinSystem(spin, g, d, e, std::move(nuclei));
  } catch (const std::invalid_argument& e2) {
    throw config_error(ctx + ": " + e2.what());
  }
}

}  // namespace esrkit

#endif  // ESRKIT_SPIN_SYSTEM_HPP
