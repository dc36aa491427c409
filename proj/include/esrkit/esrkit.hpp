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
#ifndef ESRKIT_ESRKIT_HPP
#define ESRKIT_ESRKIT_HPP

#include "esrkit/bloch.hpp"
#include "esrkit/calculators.hpp"
#include "esrkit/config.hpp"
#include "esrkit/constants.hpp"
#include "esrkit/decay.hpp"
#include "esrkit/eseem.hpp"
#include "esrkit/fit_models.hpp"
#include "esrkit/fit_spectrum.hpp"
#include "esrkit/hermitian_eig.hpp"
#include "esrkit/levmar.hpp"
#include "esrkit/mathutil.hpp"
#include "esrkit/noise.hpp"
#include "esrkit/orientation.hpp"
#include "esrkit/parallel.hpp"
#include "esrkit/pulse.hpp"
#include "esrkit/resonance.hpp"
#include "esrkit/spectrum.hpp"
#include "esrkit/spin_operators.hpp"
#include "esrkit/spin_system.hpp"
#include "esrkit/svg.hpp"
#include "esrkit/trace.hpp"

#endif  // ESRKIT_ESRKIT_HPP
