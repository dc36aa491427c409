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
#ifndef ESRKIT_CONSTANTS_HPP
#define ESRKIT_CONSTANTS_HPP

namespace esrkit {
namespace constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// mu_B/h in GHz/T: converts g*B [tesla] into an electron Zeeman frequency.
/// All Hamiltonians in this library are expressed in GHz, fields in tesla.
inline constexpr double mu_bohr_ghz_per_t = 13.9962449;

/// Nuclear gyromagnetic ratios gamma/2pi in MHz/T (CODATA).
inline constexpr double gamma_1h_mhz_per_t = 42.577;
inline constexpr double gamma_2h_mhz_per_t = 6.536;

/// k_B/h in GHz/K, used by the optional Boltzmann population weighting.
inline constexpr double k_boltzmann_ghz_per_k = 20.836619123;

inline constexpr double avogadro_per_mol = 6.02214076e23;

/// FWHM of a unit-sigma Gaussian, 2*sqrt(2*ln 2).
inline constexpr double gaussian_fwhm_per_sigma = 2.3548200450309493;

}  // namespace constants
}  // namespace esrkit

#endif  // ESRKIT_CONSTANTS_HPP
