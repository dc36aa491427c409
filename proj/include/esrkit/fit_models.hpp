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
#ifndef ESRKIT_FIT_MODELS_HPP
#define ESRKIT_FIT_MODELS_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "esrkit/constants.hpp"
#include "esrkit/levmar.hpp"
#include "esrkit/spectrum.hpp"
#include "esrkit/trace.hpp"

namespace esrkit {

/// Parameter estimates with asymptotic 1-sigma uncertainties.
struct FitResult {
  std::string model;
  std::map<std::string, double> params;
  std::map<std::string, double> sigmas;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string message;
};

inline nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json j;
  j["model"] = fit.model;
  j["params"] = fit.params;
  j["sigmas"] = fit.sigmas;
  j["residual_norm"] = fit.residual_norm;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  if (!fit.message.empty()) j["message"] = fit.message;
  return j;
}

/// Named model with parameter bounds and optional fixed initial values;
/// entries left NaN are filled by per-model heuristics from the trace.
struct FitModel {
  std::string name;
  std::vector<std::string> param_names;
  Eigen::VectorXd lower, upper, init;
  bool second_harmonic = false;

  static FitModel mono_exponential() {
    FitModel m;
    m.name = "mono_exponential";
    m.param_names = {"A", "T2_ns"};
    m.lower = Eigen::Vector2d(0.0, 1e-3);
    m.upper = Eigen::Vector2d(std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity());
    m.init = Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN());
    return m;
  }

  static FitModel modulated_decay(bool with_second_harmonic = false) {
    FitModel m;
    m.name = "modulated_decay";
    m.param_names = {"A", "T2_ns", "k", "nu_MHz"};
    m.lower = Eigen::Vector4d(0.0, 1e-3, 0.0, 1e-6);
    m.upper = Eigen::Vector4d(std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity(), 1.0,
                              std::numeric_limits<double>::infinity());
    m.init = Eigen::Vector4d::Constant(std::numeric_limits<double>::quiet_NaN());
    m.second_harmonic = with_second_harmonic;
    return m;
  }

  static FitModel inversion_recovery() {
    FitModel m;
    m.name = "inversion_recovery";
    m.param_names = {"M_inf", "T1_ns", "f"};
    m.lower = Eigen::Vector3d(1e-12, 1e-3, 1e-6);
    m.upper = Eigen::Vector3d(std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity(), 1.0);
    m.init = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
    return m;
  }

  static FitModel gaussian_line() {
    FitModel m;
    m.name = "gaussian_line";
    m.param_names = {"amplitude", "center_T", "sigma_T"};
    m.lower = Eigen::Vector3d(0.0, -std::numeric_limits<double>::infinity(), 1e-12);
    m.upper = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    m.init = Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN());
    return m;
  }

  static FitModel by_name(const std::string& name, bool with_second_harmonic = false) {
    if (name == "mono_exponential") return mono_exponential();
    if (name == "modulated_decay") return modulated_decay(with_second_harmonic);
    if (name == "inversion_recovery") return inversion_recovery();
    if (name == "gaussian_line") return gaussian_line();
    throw std::invalid_argument("unknown fit model '" + name + "'");
  }
};

namespace fitdetail {

// ---- model evaluations and analytic Jacobians -------------------------

inline double eval_mono(const Eigen::VectorXd& p, double x) {
  return p[0] * std::exp(-2.0 * x / p[1]);
}

inline void jac_mono(const Eigen::VectorXd& p, double x, double* row) {
  const double e = std::exp(-2.0 * x / p[1]);
  row[0] = e;
  row[1] = p[0] * e * 2.0 * x / (p[1] * p[1]);
}

inline double eval_modulated(const Eigen::VectorXd& p, double x, bool sh) {
  const double omega = constants::two_pi * 1e-3 * p[3];
  double v = 1.0 - 0.5 * p[2] * (1.0 - std::cos(omega * x));
  if (sh) v -= 0.125 * p[2] * p[2] * (1.0 - std::cos(2.0 * omega * x));
  return p[0] * std::exp(-2.0 * x / p[1]) * v;
}

inline void jac_modulated(const Eigen::VectorXd& p, double x, bool sh, double* row) {
  const double omega = constants::two_pi * 1e-3 * p[3];
  const double c1 = std::cos(omega * x), s1 = std::sin(omega * x);
  const double c2 = std::cos(2.0 * omega * x), s2 = std::sin(2.0 * omega * x);
  double v = 1.0 - 0.5 * p[2] * (1.0 - c1);
  double dv_dk = -0.5 * (1.0 - c1);
  double dv_domega = -0.5 * p[2] * x * s1;
  if (sh) {
    v -= 0.125 * p[2] * p[2] * (1.0 - c2);
    dv_dk -= 0.25 * p[2] * (1.0 - c2);
    dv_domega -= 0.25 * p[2] * p[2] * x * s2;
  }
  const double e = std::exp(-2.0 * x / p[1]);
  row[0] = e * v;
  row[1] = p[0] * e * v * 2.0 * x / (p[1] * p[1]);
  row[2] = p[0] * e * dv_dk;
  row[3] = p[0] * e * dv_domega * constants::two_pi * 1e-3;
}

inline double eval_recovery(const Eigen::VectorXd& p, double x) {
  return p[0] * (1.0 - 2.0 * p[2] * std::exp(-x / p[1]));
}

inline void jac_recovery(const Eigen::VectorXd& p, double x, double* row) {
  const double e = std::exp(-x / p[1]);
  row[0] = 1.0 - 2.0 * p[2] * e;
  row[1] = -2.0 * p[2] * p[0] * e * x / (p[1] * p[1]);
  row[2] = -2.0 * p[0] * e;
}

inline double eval_gaussian(const Eigen::VectorXd& p, double x) {
  const double d = (x - p[1]) / p[2];
  return p[0] * std::exp(-0.5 * d * d);
}

inline void jac_gaussian(const Eigen::VectorXd& p, double x, double* row) {
  const double d = (x - p[1]) / p[2];
  const double e = std::exp(-0.5 * d * d);
  row[0] = e;
  row[1] = p[0] * e * d / p[2];
  row[2] = p[0] * e * d * d / p[2];
}

// ---- initialization heuristics ----------------------------------------

inline double init_amplitude(const std::vector<double>& amp) {
  double a = 0.0;
  for (double v : amp) a = std::max(a, std::abs(v));
  return a > 0.0 ? a : 1.0;
}

/// T2 guess: twice the abscissa where the amplitude first falls below
/// max/e (the decay uses exp(-2x/T2)).
inline double init_t2(const std::vector<double>& x, const std::vector<double>& amp) {
  const double a0 = init_amplitude(amp);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(amp[i]) < a0 / 2.718281828459045) return std::max(2.0 * x[i], 1e-3);
  return std::max(2.0 * x.back(), 1e-3);
}

/// Dominant nonzero DFT bin of the detrended trace, in MHz. The detrend
/// subtracts a mono-exponential envelope fit. When the top bin has support
/// at half its frequency, that half is preferred as the fundamental.
inline double init_frequency_mhz(const std::vector<double>& x, const std::vector<double>& amp,
                                 double a0, double t2) {
  const std::size_t n = x.size();
  if (n < 8) return 1.0;
  const double dt = (x.back() - x.front()) / static_cast<double>(n - 1);
  std::vector<double> detrended(n);
  for (std::size_t i = 0; i < n; ++i)
    detrended[i] = amp[i] - a0 * std::exp(-2.0 * x[i] / t2);
  const std::size_t half = n / 2;
  std::vector<double> power(half + 1, 0.0);
  for (std::size_t k = 1; k <= half; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -constants::two_pi * static_cast<double>(k) * j / n;
      acc += detrended[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    power[k] = std::norm(acc);
  }
  std::size_t best = 1;
  for (std::size_t k = 2; k <= half; ++k)
    if (power[k] > power[best]) best = k;
  std::size_t pick = best;
  const std::size_t halfbin = best / 2;
  if (halfbin >= 1 && power[halfbin] > 0.25 * power[best]) pick = halfbin;
  return static_cast<double>(pick) / (static_cast<double>(n) * dt) * 1e3;  // 1/ns -> MHz
}

inline double median_spacing_uniform(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("fit: abscissa must be ascending");
  return (x.back() - x.front()) / static_cast<double>(x.size() - 1);
}

}  // namespace fitdetail

/// Least-squares fit of a named model to a trace. Initial values not pinned
/// in the model are derived from the data.
inline FitResult fit(const FitModel& model, const Trace& trace) {
  const std::size_t n_params = model.param_names.size();
  if (trace.axis.size() < n_params + 1)
    throw std::invalid_argument("fit: trace must have at least one more point than parameters");
  fitdetail::median_spacing_uniform(trace.axis);
  const std::vector<double>& x = trace.axis;
  const std::vector<double>& y = trace.amplitude;
  for (Eigen::Index i = 0; i < model.init.size(); ++i) {
    if (!std::isnan(model.init[i])) {
      if (model.init[i] < model.lower[i] || model.init[i] > model.upper[i])
        throw std::invalid_argument("fit: initial value outside bounds for '" +
                                    model.param_names[i] + "'");
    }
  }

  Eigen::VectorXd p0 = model.init;
  const bool sh = model.second_harmonic;

  std::function<double(const Eigen::VectorXd&, double)> eval;
  std::function<void(const Eigen::VectorXd&, double, double*)> jrow;

  if (model.name == "mono_exponential") {
    if (std::isnan(p0[0])) p0[0] = fitdetail::init_amplitude(y);
    if (std::isnan(p0[1])) p0[1] = fitdetail::init_t2(x, y);
    eval = fitdetail::eval_mono;
    jrow = fitdetail::jac_mono;
  } else if (model.name == "modulated_decay") {
    const double a0 = std::isnan(p0[0]) ? fitdetail::init_amplitude(y) : p0[0];
    const double t2 = std::isnan(p0[1]) ? fitdetail::init_t2(x, y) : p0[1];
    if (std::isnan(p0[0])) p0[0] = a0;
    if (std::isnan(p0[1])) p0[1] = t2;
    if (std::isnan(p0[2])) p0[2] = 0.3;
    if (std::isnan(p0[3])) p0[3] = fitdetail::init_frequency_mhz(x, y, a0, t2);
    eval = [sh](const Eigen::VectorXd& p, double xx) {
      return fitdetail::eval_modulated(p, xx, sh);
    };
    jrow = [sh](const Eigen::VectorXd& p, double xx, double* row) {
      fitdetail::jac_modulated(p, xx, sh, row);
    };
  } else if (model.name == "inversion_recovery") {
    const double m_inf = std::isnan(p0[0]) ? std::max(std::abs(y.back()), 1e-6) : p0[0];
    if (std::isnan(p0[0])) p0[0] = m_inf;
    if (std::isnan(p0[2])) {
      double f0 = 0.5 * (1.0 - y.front() / m_inf);
      p0[2] = std::min(std::max(f0, 0.05), 1.0);
    }
    if (std::isnan(p0[1])) {
      double t1 = x.back() / 3.0;
      for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i - 1] < 0.0 && y[i] >= 0.0) {
          const double cross =
              x[i - 1] + (x[i] - x[i - 1]) * (-y[i - 1]) / (y[i] - y[i - 1]);
          const double lg = std::log(2.0 * p0[2]);
          if (lg > 0.0) t1 = cross / lg;
          break;
        }
      }
      p0[1] = std::max(t1, 1e-3);
    }
    eval = fitdetail::eval_recovery;
    jrow = fitdetail::jac_recovery;
  } else if (model.name == "gaussian_line") {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
      if (y[i] > y[arg]) arg = i;
    if (std::isnan(p0[0])) p0[0] = std::max(y[arg], 1e-12);
    if (std::isnan(p0[1])) p0[1] = x[arg];
    if (std::isnan(p0[2])) {
      const double halfmax = 0.5 * y[arg];
      double left = x.front(), right = x.back();
      for (std::size_t i = arg; i-- > 0;)
        if (y[i] < halfmax) {
          left = x[i];
          break;
        }
      for (std::size_t i = arg + 1; i < y.size(); ++i)
        if (y[i] < halfmax) {
          right = x[i];
          break;
        }
      p0[2] = std::max((right - left) / constants::gaussian_fwhm_per_sigma,
                       fitdetail::median_spacing_uniform(x));
    }
    eval = fitdetail::eval_gaussian;
    jrow = fitdetail::jac_gaussian;
  } else {
    throw std::invalid_argument("fit: unknown model '" + model.name + "'");
  }

  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  const Eigen::Index np = static_cast<Eigen::Index>(n_params);
  ResidualFn residual = [&, m](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) r[i] = eval(p, x[i]) - y[i];
    return r;
  };
  JacobianFn jacfn = [&, m, np](const Eigen::VectorXd& p) {
    Eigen::MatrixXd jac(m, np);
    std::vector<double> row(n_params);
    for (Eigen::Index i = 0; i < m; ++i) {
      jrow(p, x[i], row.data());
      for (Eigen::Index c = 0; c < np; ++c) jac(i, c) = row[c];
    }
    return jac;
  };

  const LevMarResult lm =
      levenberg_marquardt(residual, jacfn, p0, model.lower, model.upper);

  FitResult out;
  out.model = model.name;
  for (std::size_t i = 0; i < n_params; ++i) {
    out.params[model.param_names[i]] = lm.params[static_cast<Eigen::Index>(i)];
    out.sigmas[model.param_names[i]] = lm.sigmas[static_cast<Eigen::Index>(i)];
  }
  out.residual_norm = lm.residual_norm;
  out.converged = lm.converged;
  out.iterations = lm.iterations;
  out.message = lm.message;
  if (model.name == "gaussian_line") {
    out.params["fwhm_T"] = out.params["sigma_T"] * constants::gaussian_fwhm_per_sigma;
    out.sigmas["fwhm_T"] = out.sigmas["sigma_T"] * constants::gaussian_fwhm_per_sigma;
  }
  return out;
}

/// M(T) = M_inf*(1 - 2f*exp(-T/T1)); the fixed-tau echo factor is absorbed
/// into M_inf. Returns T1, M_inf and the inversion efficiency f.
inline FitResult fit_inversion_recovery(const Trace& trace, double tau_fixed_ns) {
  if (!(tau_fixed_ns >= 0.0))
    throw std::invalid_argument("fit_inversion_recovery: tau_fixed must be >= 0");
  FitResult out = fit(FitModel::inversion_recovery(), trace);
  out.params["tau_fixed_ns"] = tau_fixed_ns;
  return out;
}

/// Gaussian line profile of a single-peaked spectrum; params carry the
/// center, sigma and FWHM in tesla.
inline FitResult fit_gaussian_line(const Spectrum& spectrum) {
  Trace trace = Trace::make(AxisKind::field_t, spectrum.field_t, spectrum.amplitude);
  return fit(FitModel::gaussian_line(), trace);
}

}  // namespace esrkit

#endif  // ESRKIT_FIT_MODELS_HPP
