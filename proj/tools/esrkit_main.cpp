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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esrkit/esrkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitIoFailure = 3;

namespace fs = std::filesystem;

std::string output_path(const esrkit::OutputSpec& out, const std::string& extension) {
  const fs::path dir(out.resolved_dir());
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw esrkit::io_error("cannot create output directory '" + dir.string() + "'");
  return (dir / (out.basename + extension)).string();
}

void print_outputs(const std::vector<std::string>& paths) {
  nlohmann::json j;
  j["outputs"] = paths;
  std::cout << j.dump(2) << "\n";
}

std::vector<double> sweep(double start, double stop, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = start + (stop - start) * i / static_cast<double>(points - 1);
  return out;
}

int cmd_simulate_spectrum(const std::string& config_path) {
  const esrkit::ExperimentConfig cfg = esrkit::load_experiment_config(config_path);
  if (!cfg.system) throw esrkit::config_error("simulate-spectrum: config needs a 'system' block");
  if (!cfg.spectrum)
    throw esrkit::config_error("simulate-spectrum: config needs a 'spectrum' block");
  const esrkit::SpectrumJob& job = *cfg.spectrum;
  const esrkit::OrientationGrid grid = esrkit::make_grid(job.grid_n, job.scheme);
  const std::vector<double> axis = esrkit::uniform_axis(job.b_min_t, job.b_max_t, job.points);
  esrkit::SpectrumOptions opt;
  opt.lineshape = job.lineshape;
  opt.population_weighting = job.population_weighting;
  opt.temperature_k = job.temperature_k;
  opt.threads = job.threads;
  esrkit::Spectrum spec =
      esrkit::echo_detected_spectrum(*cfg.system, grid, job.nu_mw_ghz, axis, job.sigma_t, opt);
  spec.meta["grid_scheme"] = esrkit::to_string(job.scheme);
  if (cfg.noise.sigma > 0.0) {
    esrkit::noise::add_gaussian(spec.amplitude, cfg.noise.sigma, cfg.noise.seed);
    for (double& v : spec.amplitude) v = std::max(v, 0.0);
    spec.meta["noise_sigma"] = esrkit::detail::format_g12(cfg.noise.sigma);
    spec.meta["noise_seed"] = std::to_string(cfg.noise.seed);
  }
  std::vector<std::string> outputs;
  const std::string csv = output_path(cfg.output, ".csv");
  esrkit::write_spectrum_csv(spec, csv);
  outputs.push_back(csv);
  if (cfg.output.svg) {
    const std::string svg = output_path(cfg.output, ".svg");
    esrkit::write_svg_line_plot(svg, spec.field_t, spec.amplitude, "echo-detected spectrum",
                                "field (T)", "amplitude");
    outputs.push_back(svg);
  }
  print_outputs(outputs);
  return kExitOk;
}

int cmd_simulate_decay(const std::string& config_path) {
  const esrkit::ExperimentConfig cfg = esrkit::load_experiment_config(config_path);
  if (!cfg.relaxation)
    throw esrkit::config_error("simulate-decay: config needs a 'relaxation' block");
  if (!cfg.sequence || cfg.sequence->kind != "hahn")
    throw esrkit::config_error("simulate-decay: config needs a 'sequence' block with \"hahn\"");
  const esrkit::SequenceJob& job = *cfg.sequence;
  const std::vector<double> tau = sweep(job.tau_start_ns, job.tau_stop_ns, job.tau_points);
  const esrkit::EseemModel* eseem = cfg.eseem ? &*cfg.eseem : nullptr;
  esrkit::Trace trace = esrkit::hahn_decay_curve(tau, *cfg.relaxation, eseem, job.amplitude);
  if (cfg.noise.sigma > 0.0) {
    esrkit::noise::add_gaussian(trace.amplitude, cfg.noise.sigma, cfg.noise.seed);
    trace.meta["noise_sigma"] = esrkit::detail::format_g12(cfg.noise.sigma);
    trace.meta["noise_seed"] = std::to_string(cfg.noise.seed);
  }
  std::vector<std::string> outputs;
  const std::string csv = output_path(cfg.output, ".csv");
  esrkit::write_trace_csv(trace, csv);
  outputs.push_back(csv);
  if (cfg.output.svg) {
    const std::string svg = output_path(cfg.output, ".svg");
    esrkit::write_svg_line_plot(svg, trace.axis, trace.amplitude, "echo decay", "tau (ns)",
                                "echo amplitude");
    outputs.push_back(svg);
  }
  print_outputs(outputs);
  return kExitOk;
}

int cmd_simulate_recovery(const std::string& config_path) {
  const esrkit::ExperimentConfig cfg = esrkit::load_experiment_config(config_path);
  if (!cfg.relaxation)
    throw esrkit::config_error("simulate-recovery: config needs a 'relaxation' block");
  if (!cfg.sequence || cfg.sequence->kind != "inversion_recovery")
    throw esrkit::config_error(
        "simulate-recovery: config needs a 'sequence' block with \"inversion_recovery\"");
  const esrkit::SequenceJob& job = *cfg.sequence;
  const std::vector<double> recovery =
      sweep(job.recovery_start_ns, job.recovery_stop_ns, job.recovery_points);
  esrkit::Trace trace = esrkit::inversion_recovery_curve(
      recovery, *cfg.relaxation, job.tau_fixed_ns, job.inversion_efficiency, job.amplitude);
  if (cfg.noise.sigma > 0.0) {
    esrkit::noise::add_gaussian(trace.amplitude, cfg.noise.sigma, cfg.noise.seed);
    trace.meta["noise_sigma"] = esrkit::detail::format_g12(cfg.noise.sigma);
    trace.meta["noise_seed"] = std::to_string(cfg.noise.seed);
  }
  std::vector<std::string> outputs;
  const std::string csv = output_path(cfg.output, ".csv");
  esrkit::write_trace_csv(trace, csv);
  outputs.push_back(csv);
  if (cfg.output.svg) {
    const std::string svg = output_path(cfg.output, ".svg");
    esrkit::write_svg_line_plot(svg, trace.axis, trace.amplitude, "inversion recovery",
                                "recovery delay (ns)", "echo amplitude");
    outputs.push_back(svg);
  }
  print_outputs(outputs);
  return kExitOk;
}

int emit_fit_result(const esrkit::FitResult& result, const std::string& out_path) {
  const nlohmann::json j = esrkit::to_json(result);
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw esrkit::io_error("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw esrkit::io_error("write failed for '" + out_path + "'");
  }
  if (!result.converged) {
    std::cerr << "fit did not converge: " << result.message << "\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_fit_decay(const std::string& in_path, const std::string& model_name,
                  bool second_harmonic, const std::string& out_path) {
  if (model_name != "mono_exponential" && model_name != "modulated_decay")
    throw esrkit::config_error("fit-decay: model must be mono_exponential or modulated_decay");
  const esrkit::Trace trace = esrkit::read_trace_csv_file(in_path);
  const esrkit::FitResult result =
      esrkit::fit(esrkit::FitModel::by_name(model_name, second_harmonic), trace);
  return emit_fit_result(result, out_path);
}

int cmd_fit_recovery(const std::string& in_path, double tau_ns, const std::string& out_path) {
  const esrkit::Trace trace = esrkit::read_trace_csv_file(in_path);
  const esrkit::FitResult result = esrkit::fit_inversion_recovery(trace, tau_ns);
  return emit_fit_result(result, out_path);
}

int cmd_fit_spectrum(const std::string& in_path, const std::string& model_name,
                     const std::string& config_path, const std::string& out_path) {
  const esrkit::Spectrum target = esrkit::read_spectrum_csv_file(in_path);
  if (model_name == "gaussian_line") {
    const esrkit::FitResult result = esrkit::fit_gaussian_line(target);
    return emit_fit_result(result, out_path);
  }
  if (model_name != "zfs")
    throw esrkit::config_error("fit-spectrum: model must be gaussian_line or zfs");
  if (config_path.empty())
    throw esrkit::config_error("fit-spectrum: the zfs model needs --config for the initial guess");
  const esrkit::ExperimentConfig cfg = esrkit::load_experiment_config(config_path);
  if (!cfg.system)
    throw esrkit::config_error("fit-spectrum: config needs a 'system' block (initial guess)");
  esrkit::ZfsFitOptions opt;
  double nu = 9.7;
  if (cfg.spectrum) {
    const esrkit::SpectrumJob& job = *cfg.spectrum;
    nu = job.nu_mw_ghz;
    opt.grid_n = job.grid_n;
    opt.scheme = job.scheme;
    opt.lineshape = job.lineshape;
    opt.threads = job.threads;
    opt.sigma_init_t = job.sigma_t;
  } else if (target.nu_mw_ghz > 0.0) {
    nu = target.nu_mw_ghz;
  }
  const esrkit::FitResult result = esrkit::fit_zfs_spectrum(target, *cfg.system, nu, opt);
  return emit_fit_result(result, out_path);
}

int cmd_calc_dilution(double concentration, double molar_mass) {
  const esrkit::DilutionSpec spec(concentration, molar_mass);
  const double r_nm = esrkit::mean_separation_nm(spec);
  nlohmann::json j;
  j["concentration_mg_per_ml"] = concentration;
  j["molar_mass_g_per_mol"] = molar_mass;
  j["mean_separation_nm"] = r_nm;
  j["dipolar_coupling_MHz"] = esrkit::dipolar_coupling_mhz(r_nm);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_calc_fom(double t2_ns, double top_ns) {
  nlohmann::json j;
  j["T2_ns"] = t2_ns;
  j["t_op_ns"] = top_ns;
  j["figure_of_merit"] = esrkit::figure_of_merit(t2_ns, top_ns);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsed ESR simulation and fitting toolkit"};
  app.require_subcommand(1);

  std::string config_path, in_path, out_path, model_name;
  bool second_harmonic = false;
  double tau_ns = 0.0, concentration = 0.0, molar_mass = 0.0, t2_ns = 0.0, top_ns = 0.0;

  auto* sim_spectrum = app.add_subcommand("simulate-spectrum", "powder echo-detected field sweep");
  sim_spectrum->add_option("--config", config_path, "experiment config JSON")->required();

  auto* sim_decay = app.add_subcommand("simulate-decay", "Hahn echo decay curve");
  sim_decay->add_option("--config", config_path, "experiment config JSON")->required();

  auto* sim_recovery = app.add_subcommand("simulate-recovery", "inversion recovery curve");
  sim_recovery->add_option("--config", config_path, "experiment config JSON")->required();

  auto* fit_decay = app.add_subcommand("fit-decay", "fit a decay trace");
  fit_decay->add_option("--in", in_path, "input trace CSV")->required();
  fit_decay->add_option("--model", model_name, "mono_exponential | modulated_decay")->required();
  fit_decay->add_flag("--second-harmonic", second_harmonic, "include the modulation overtone");
  fit_decay->add_option("--out", out_path, "write the fit result JSON here too");

  auto* fit_recovery = app.add_subcommand("fit-recovery", "fit an inversion recovery trace");
  fit_recovery->add_option("--in", in_path, "input trace CSV")->required();
  fit_recovery->add_option("--tau-ns", tau_ns, "fixed echo delay used during acquisition")
      ->required();
  fit_recovery->add_option("--out", out_path, "write the fit result JSON here too");

  auto* fit_spectrum = app.add_subcommand("fit-spectrum", "fit a spectrum");
  fit_spectrum->add_option("--in", in_path, "input spectrum CSV")->required();
  fit_spectrum->add_option("--model", model_name, "gaussian_line | zfs")->required();
  fit_spectrum->add_option("--config", config_path, "config with the zfs initial guess");
  fit_spectrum->add_option("--out", out_path, "write the fit result JSON here too");

  auto* calc_dilution = app.add_subcommand("calc-dilution", "mean separation at a concentration");
  calc_dilution->add_option("--concentration-mg-per-ml", concentration, "solute concentration")
      ->required();
  calc_dilution->add_option("--molar-mass-g-per-mol", molar_mass, "molar mass")->required();

  auto* calc_fom = app.add_subcommand("calc-fom", "coherence time over operation time");
  calc_fom->add_option("--t2-ns", t2_ns, "coherence time")->required();
  calc_fom->add_option("--top-ns", top_ns, "single-operation time")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    if (app.got_subcommand(sim_spectrum)) return cmd_simulate_spectrum(config_path);
    if (app.got_subcommand(sim_decay)) return cmd_simulate_decay(config_path);
    if (app.got_subcommand(sim_recovery)) return cmd_simulate_recovery(config_path);
    if (app.got_subcommand(fit_decay))
      return cmd_fit_decay(in_path, model_name, second_harmonic, out_path);
    if (app.got_subcommand(fit_recovery)) return cmd_fit_recovery(in_path, tau_ns, out_path);
    if (app.got_subcommand(fit_spectrum))
      return cmd_fit_spectrum(in_path, model_name, config_path, out_path);
    if (app.got_subcommand(calc_dilution)) return cmd_calc_dilution(concentration, molar_mass);
    if (app.got_subcommand(calc_fom)) return cmd_calc_fom(t2_ns, top_ns);
  } catch (const esrkit::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const esrkit::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return kExitBadConfig;
}
