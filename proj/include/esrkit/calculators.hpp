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
#ifndef ESRKIT_CALCULATORS_HPP
#define ESRKIT_CALCULATORS_HPP

#include <cmath>
#include <stdexcept>

#include "esrkit/constants.hpp"

namespace esrkit {

/// Solute concentration and molar mass of the dissolved species.
struct DilutionSpec {
  double concentration_mg_per_ml;
  double molar_mass_g_per_mol;

  DilutionSpec(double concentration, double molar_mass)
      : concentration_mg_per_ml(concentration), molar_mass_g_per_mol(molar_mass) {
    if (!(concentration_mg_per_ml > 0.0))
      throw std::invalid_argument("DilutionSpec: concentration must be positive");
    if (!(molar_mass_g_per_mol > 0.0))
      throw std::invalid_argument("DilutionSpec: molar mass must be positive");
  }
};

/// Mean center-to-center separation of dissolved molecules in nm, the cube
/// root of the volume per molecule. 1 mg/ml = 1 g/l.
inline double mean_separation_nm(const DilutionSpec& spec) {
  const double molecules_per_m3 =
      1e3 * spec.concentration_mg_per_ml * constants::avogadro_per_mol /
      spec.molar_mass_g_per_mol;
  return std::cbrt(1.0 / molecules_per_m3) * 1e9;
}

/// Order-of-magnitude dipolar coupling between two electron spins a
/// distance r apart: 100/r^3 MHz for r in nm.
inline double dipolar_coupling_mhz(double r_nm) {
  if (!(r_nm > 0.0)) throw std::invalid_argument("dipolar_coupling: r must be positive");
  return 100.0 / (r_nm * r_nm * r_nm);
}

/// Single-qubit figure of merit: coherence time over operation time.
inline double figure_of_merit(double t2_ns, double t_op_ns) {
  if (!(t2_ns > 0.0 && t_op_ns > 0.0))
    throw std::invalid_argument("figure_of_merit: times must be positive");
  return t2_ns / t_op_ns;
}

}  // namespace esrkit

#endif  // ESRKIT_CALCULATORS_HPP
