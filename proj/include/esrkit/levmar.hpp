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
#ifndef ESRKIT_LEVMAR_HPP
#define ESRKIT_LEVMAR_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace esrkit {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using ProjectFn = std::function<void(Eigen::VectorXd&)>;

struct LevMarOptions {
  int max_iterations = 200;
  double ftol = 1e-12;  ///< relative cost decrease
  double xtol = 1e-12;  ///< per-component relative step size
  double gtol = 1e-12;  ///< gradient inf-norm, relative to max(1, initial)
  double lambda0 = 1e-3;
  double lambda_up = 8.0;
  double lambda_down = 0.25;
  double lambda_max = 1e12;
};

struct LevMarResult {
  Eigen::VectorXd params;
  Eigen::VectorXd sigmas;
  double residual_norm = 0.0;  ///< sqrt(sum of squared residuals)
  bool converged = false;
  int iterations = 0;
  std::string message;
};

namespace detail {

inline Eigen::MatrixXd forward_difference_jacobian(const ResidualFn& residual,
                                                   const Eigen::VectorXd& p,
                                                   const Eigen::VectorXd& r0,
                                                   const Eigen::VectorXd& lo,
                                                   const Eigen::VectorXd& hi) {
  const auto n = p.size();
  Eigen::MatrixXd jac(r0.size(), n);
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  for (Eigen::Index i = 0; i < n; ++i) {
    double h = root_eps * (std::abs(p[i]) + root_eps);
    Eigen::VectorXd q = p;
    if (q[i] + h > hi[i]) h = -h;  // step stays inside the box
    q[i] += h;
    jac.col(i) = (residual(q) - r0) / h;
  }
  return jac;
}

}  // namespace detail

/// Damped least squares with a Marquardt diagonal scaling: steps that lower
/// the cost are accepted and relax the damping, rejected steps inflate it.
/// Box bounds clamp every candidate; an optional projection callback can
/// enforce coupled constraints. When no Jacobian is supplied, forward
/// differences are used.
inline LevMarResult levenberg_marquardt(const ResidualFn& residual, const JacobianFn& jacobian,
                                        Eigen::VectorXd p, const Eigen::VectorXd& lo,
                                        const Eigen::VectorXd& hi,
                                        const LevMarOptions& opt = {},
                                        const ProjectFn& project = {}) {
  const Eigen::Index n = p.size();
  if (lo.size() != n || hi.size() != n)
    throw std::invalid_argument("levenberg_marquardt: bounds size mismatch");
  const auto clamp_box = [&](Eigen::VectorXd& q) {
    for (Eigen::Index i = 0; i < n; ++i) q[i] = std::min(std::max(q[i], lo[i]), hi[i]);
    if (project) project(q);
  };
  clamp_box(p);

  LevMarResult out;
  Eigen::VectorXd r = residual(p);
  if (!r.allFinite()) {
    out.params = p;
    out.sigmas = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    out.message = "non-finite residual at the initial point";
    return out;
  }
  double cost = r.squaredNorm();
  double lambda = opt.lambda0;
  double g0_norm = -1.0;
  bool degenerate = false;
  Eigen::MatrixXd jac;

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    jac = jacobian ? jacobian(p) : detail::forward_difference_jacobian(residual, p, r, lo, hi);
    if (!jac.allFinite()) {
      out.message = "non-finite jacobian";
      degenerate = true;
      break;
    }
    const Eigen::VectorXd grad = jac.transpose() * r;
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (g0_norm < 0.0) g0_norm = gnorm;
    if (gnorm <= opt.gtol * std::max(1.0, g0_norm)) {
      out.converged = true;
      out.message = "gradient below tolerance";
      break;
    }

    const Eigen::MatrixXd hess = jac.transpose() * jac;
    const Eigen::VectorXd diag = hess.diagonal();
    const double diag_floor = 1e-14 * std::max(1.0, diag.maxCoeff());

    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd damped = hess;
      for (Eigen::Index i = 0; i < n; ++i)
        damped(i, i) += lambda * std::max(diag[i], diag_floor);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) {
        lambda *= opt.lambda_up;
        if (lambda > opt.lambda_max) break;
        continue;
      }
      Eigen::VectorXd p_new = p + step;
      clamp_box(p_new);
      const Eigen::VectorXd r_new = residual(p_new);
      const double cost_new = r_new.allFinite()
                                  ? r_new.squaredNorm()
                                  : std::numeric_limits<double>::infinity();
      if (cost_new < cost) {
        const Eigen::VectorXd moved = p_new - p;
        bool small_step = true;
        for (Eigen::Index i = 0; i < n; ++i)
          if (std::abs(moved[i]) > opt.xtol * (std::abs(p[i]) + opt.xtol)) small_step = false;
        const bool small_decrease = (cost - cost_new) <= opt.ftol * cost;
        p = p_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda * opt.lambda_down, 1e-12);
        accepted = true;
        if (small_step) {
          out.converged = true;
          out.message = "step below tolerance";
        } else if (small_decrease) {
          out.converged = true;
          out.message = "cost decrease below tolerance";
        }
        break;
      }
      lambda *= opt.lambda_up;
      if (lambda > opt.lambda_max) break;
    }
    if (!accepted) {
      if (!out.converged && out.message.empty()) out.message = "no acceptable step found";
      // A stall at an already tiny gradient is convergence, not failure.
      if (jac.allFinite()) {
        const double gnow = (jac.transpose() * r).lpNorm<Eigen::Infinity>();
        if (gnow <= 1e-8 * std::max(1.0, g0_norm)) {
          out.converged = true;
          out.message = "stationary point";
        }
      }
      break;
    }
    if (out.converged) {
      ++iter;
      break;
    }
  }
  if (iter >= opt.max_iterations && !out.converged) out.message = "iteration limit reached";

  // Asymptotic 1-sigma uncertainties from the linearized covariance
  // s^2 * (J^T J)^-1, with small singular values ridged up so unconstrained
  // directions report large (not spuriously tiny) uncertainties.
  jac = jacobian ? jacobian(p) : detail::forward_difference_jacobian(residual, p, r, lo, hi);
  out.params = p;
  out.iterations = iter;
  out.residual_norm = std::sqrt(cost);
  const Eigen::Index m = r.size();
  const double dof = static_cast<double>(std::max<Eigen::Index>(m - n, 1));
  const double s2 = cost / dof;
  out.sigmas = Eigen::VectorXd::Zero(n);
  if (jac.allFinite()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    const double rank_tol = std::max(static_cast<double>(std::max(m, n)) *
                                         std::numeric_limits<double>::epsilon() * smax,
                                     1e-300);
    const Eigen::MatrixXd& v = svd.matrixV();
    for (Eigen::Index i = 0; i < n; ++i) {
      double var = 0.0;
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        double s = sv[k];
        if (s < rank_tol) {
          degenerate = true;
          s = rank_tol;
        }
        var += (v(i, k) * v(i, k)) / (s * s);
      }
      var = std::min(var, 1e280);
      out.sigmas[i] = std::sqrt(var * s2);
    }
  } else {
    degenerate = true;
    out.sigmas = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  }
  if (degenerate) {
    out.converged = false;
    if (out.message.empty() || out.message == "gradient below tolerance")
      out.message = "degenerate jacobian";
    else
      out.message += "; degenerate jacobian";
  }
  return out;
}

}  // namespace esrkit

#endif  // ESRKIT_LEVMAR_HPP
