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
#ifndef ESRKIT_CONFIG_HPP
#define ESRKIT_CONFIG_HPP

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "esrkit/eseem.hpp"
#include "esrkit/json_util.hpp"
#include "esrkit/orientation.hpp"
#include "esrkit/pulse.hpp"
#include "esrkit/spectrum.hpp"
#include "esrkit/spin_system.hpp"

namespace esrkit {

inline constexpr const char* kConfigSchema = "esrkit-config/1";

struct SpectrumJob {
  double nu_mw_ghz = 9.7;  ///< X-band default, configurable
  double b_min_t = 0.0;
  double b_max_t = 1.0;
  int points = 1001;
  double sigma_t = 0.005;
  int grid_n = 100;
  GridScheme scheme = GridScheme::spiral;
  Lineshape lineshape = Lineshape::gaussian;
  bool population_weighting = false;
  double temperature_k = 4.5;
  int threads = 1;
};

struct SequenceJob {
  std::string kind;  ///< "hahn" or "inversion_recovery"
  // hahn sweep
  double tau_start_ns = 50.0;
  double tau_stop_ns = 1500.0;
  int tau_points = 100;
  double amplitude = 1.0;
  // inversion recovery sweep
  double recovery_start_ns = 0.0;
  double recovery_stop_ns = 10000.0;
  int recovery_points = 100;
  double tau_fixed_ns = 200.0;
  double inversion_efficiency = 1.0;
  // descriptive pulse list; decay curves are closed-form, so these are
  // carried for pulse-engine use and documentation
  std::vector<Pulse> pulses;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct OutputSpec {
  std::string dir;  ///< empty = env override or current directory
  std::string basename = "out";
  bool svg = false;

  std::string resolved_dir() const {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv("ESRKIT_OUTPUT_DIR"); env != nullptr && env[0] != '\0')
      return env;
    return ".";
  }
};

/// Parsed experiment configuration. Blocks are optional; each command
/// validates that the blocks it needs are present.
struct ExperimentConfig {
  std::optional<SpinSystem> system;
  std::optional<SpectrumJob> spectrum;
  std::optional<SequenceJob> sequence;
  std::optional<RelaxationParams> relaxation;
  std::optional<EseemModel> eseem;
  NoiseSpec noise;
  OutputSpec output;
};

namespace detail {

inline Pulse pulse_from_json(const nlohmann::json& j, const std::string& ctx) {
  jsonutil::check_keys(j, {"duration_ns", "angle", "phase_rad"}, ctx);
  const double duration = jsonutil::get_required<double>(j, "duration_ns", ctx);
  double angle = 0.0;
  if (!j.contains("angle")) throw config_error(ctx + ": missing key 'angle'");
  if (j.at("angle").is_string()) {
    const std::string name = j.at("angle").get<std::string>();
    if (name == "pi/2")
      angle = constants::pi / 2.0;
    else if (name == "pi")
      angle = constants::pi;
    else
      throw config_error(ctx + ": angle must be \"pi/2\", \"pi\", or radians");
  } else {
    angle = jsonutil::get_required<double>(j, "angle", ctx);
  }
  const double phase = jsonutil::get_or<double>(j, "phase_rad", 0.0, ctx);
  try {
    return Pulse(duration, angle, phase);
  } catch (const std::invalid_argument& e) {
    throw config_error(ctx + ": " + e.what());
  }
}

inline SpectrumJob spectrum_job_from_json(const nlohmann::json& j, const std::string& ctx) {
  jsonutil::check_keys(j,
                       {"nu_mw_GHz", "B_min_T", "B_max_T", "points", "sigma_T", "grid_n",
                        "grid_scheme", "lineshape", "population_weighting", "temperature_K",
                        "threads"},
                       ctx);
  SpectrumJob job;
  job.nu_mw_ghz = jsonutil::get_or<double>(j, "nu_mw_GHz", job.nu_mw_ghz, ctx);
  job.b_min_t = jsonutil::get_required<double>(j, "B_min_T", ctx);
  job.b_max_t = jsonutil::get_required<double>(j, "B_max_T", ctx);
  job.points = jsonutil::get_or<int>(j, "points", job.points, ctx);
  job.sigma_t = jsonutil::get_required<double>(j, "sigma_T", ctx);
  job.grid_n = jsonutil::get_or<int>(j, "grid_n", job.grid_n, ctx);
  try {
    job.scheme = grid_scheme_from_string(
        jsonutil::get_or<std::string>(j, "grid_scheme", "spiral", ctx));
    job.lineshape = lineshape_from_string(
        jsonutil::get_or<std::string>(j, "lineshape", "gaussian", ctx));
  } catch (const std::invalid_argument& e) {
    throw config_error(ctx + ": " + e.what());
  }
  job.population_weighting =
      jsonutil::get_or<bool>(j, "population_weighting", false, ctx);
  job.temperature_k = jsonutil::get_or<double>(j, "temperature_K", 4.5, ctx);
  job.threads = jsonutil::get_or<int>(j, "threads", 1, ctx);
  if (!(job.b_max_t > job.b_min_t) || !(job.b_min_t >= 0.0))
    throw config_error(ctx + ": field range must be ascending and non-negative");
  if (job.points < 2) throw config_error(ctx + ": points must be >= 2");
  if (!(job.sigma_t > 0.0)) throw config_error(ctx + ": sigma_T must be positive");
  if (job.grid_n < 2) throw config_error(ctx + ": grid_n must be >= 2");
  return job;
}

inline SequenceJob sequence_job_from_json(const nlohmann::json& j, const std::string& ctx) {
  jsonutil::check_keys(j,
                       {"sequence", "tau_start_ns", "tau_stop_ns", "tau_points", "amplitude",
                        "T_start_ns", "T_stop_ns", "T_points", "tau_ns",
                        "inversion_efficiency", "pulses"},
                       ctx);
  SequenceJob job;
  job.kind = jsonutil::get_required<std::string>(j, "sequence", ctx);
  if (job.kind != "hahn" && job.kind != "inversion_recovery")
    throw config_error(ctx + ": sequence must be \"hahn\" or \"inversion_recovery\"");
  job.tau_start_ns = jsonutil::get_or<double>(j, "tau_start_ns", job.tau_start_ns, ctx);
  job.tau_stop_ns = jsonutil::get_or<double>(j, "tau_stop_ns", job.tau_stop_ns, ctx);
  job.tau_points = jsonutil::get_or<int>(j, "tau_points", job.tau_points, ctx);
  job.amplitude = jsonutil::get_or<double>(j, "amplitude", 1.0, ctx);
  job.recovery_start_ns = jsonutil::get_or<double>(j, "T_start_ns", job.recovery_start_ns, ctx);
  job.recovery_stop_ns = jsonutil::get_or<double>(j, "T_stop_ns", job.recovery_stop_ns, ctx);
  job.recovery_points = jsonutil::get_or<int>(j, "T_points", job.recovery_points, ctx);
  job.tau_fixed_ns = jsonutil::get_or<double>(j, "tau_ns", job.tau_fixed_ns, ctx);
  job.inversion_efficiency =
      jsonutil::get_or<double>(j, "inversion_efficiency", 1.0, ctx);
  if (j.contains("pulses")) {
    if (!j.at("pulses").is_array()) throw config_error(ctx + ": 'pulses' must be an array");
    std::size_t idx = 0;
    for (const auto& item : j.at("pulses"))
      job.pulses.push_back(
          pulse_from_json(item, ctx + ".pulses[" + std::to_string(idx++) + "]"));
  }
  if (job.kind == "hahn") {
    if (!(job.tau_start_ns > 0.0) || !(job.tau_stop_ns > job.tau_start_ns) ||
        job.tau_points < 2)
      throw config_error(ctx + ": hahn sweep needs 0 < tau_start < tau_stop and >= 2 points");
  } else {
    if (!(job.recovery_start_ns >= 0.0) || !(job.recovery_stop_ns > job.recovery_start_ns) ||
        job.recovery_points < 2)
      throw config_error(ctx + ": recovery sweep needs 0 <= T_start < T_stop and >= 2 points");
    if (!(job.tau_fixed_ns > 0.0)) throw config_error(ctx + ": tau_ns must be positive");
    if (!(job.inversion_efficiency > 0.0 && job.inversion_efficiency <= 1.0))
      throw config_error(ctx + ": inversion_efficiency must lie in (0, 1]");
  }
  return job;
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  jsonutil::check_keys(
      j, {"schema", "system", "spectrum", "sequence", "relaxation", "eseem", "noise", "output"},
      "config");
  const auto schema = jsonutil::get_required<std::string>(j, "schema", "config");
  if (schema != kConfigSchema)
    throw config_error("config: unsupported schema '" + schema + "', expected '" +
                       std::string(kConfigSchema) + "'");
  ExperimentConfig cfg;
  if (j.contains("system")) cfg.system = spin_system_from_json(j.at("system"), "config.system");
  if (j.contains("spectrum"))
    cfg.spectrum = detail::spectrum_job_from_json(j.at("spectrum"), "config.spectrum");
  if (j.contains("sequence"))
    cfg.sequence = detail::sequence_job_from_json(j.at("sequence"), "config.sequence");
  if (j.contains("relaxation")) {
    const auto& r = j.at("relaxation");
    jsonutil::check_keys(r, {"T1_ns", "T2_ns"}, "config.relaxation");
    const double t2 = jsonutil::get_required<double>(r, "T2_ns", "config.relaxation");
    const double t1 = jsonutil::get_or<double>(r, "T1_ns",
                                               std::numeric_limits<double>::infinity(),
                                               "config.relaxation");
    try {
      cfg.relaxation = RelaxationParams(t1, t2);
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("config.relaxation: ") + e.what());
    }
  }
  if (j.contains("eseem")) cfg.eseem = eseem_model_from_json(j.at("eseem"), "config.eseem");
  if (j.contains("noise")) {
    const auto& noise = j.at("noise");
    jsonutil::check_keys(noise, {"sigma", "seed"}, "config.noise");
    cfg.noise.sigma = jsonutil::get_or<double>(noise, "sigma", 0.0, "config.noise");
    if (!(cfg.noise.sigma >= 0.0)) throw config_error("config.noise: sigma must be >= 0");
    if (cfg.noise.sigma > 0.0) {
      if (!noise.contains("seed"))
        throw config_error("config.noise: seed is mandatory when sigma > 0");
      cfg.noise.seed = jsonutil::get_required<std::uint64_t>(noise, "seed", "config.noise");
    } else {
      cfg.noise.seed = jsonutil::get_or<std::uint64_t>(noise, "seed", 0, "config.noise");
    }
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    jsonutil::check_keys(out, {"dir", "basename", "svg"}, "config.output");
    cfg.output.dir = jsonutil::get_or<std::string>(out, "dir", "", "config.output");
    cfg.output.basename = jsonutil::get_or<std::string>(out, "basename", "out", "config.output");
    cfg.output.svg = jsonutil::get_or<bool>(out, "svg", false, "config.output");
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config '" + path + "': " + e.what());
  }
  return experiment_config_from_json(j);
}

}  // namespace esrkit

#endif  // ESRKIT_CONFIG_HPP
