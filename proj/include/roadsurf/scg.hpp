#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace roadsurf {

// Scaled conjugate gradient (Moller 1993): line-search-free CG with a
// Levenberg-Marquardt style model-trust scaling term.
//
// Objective must provide:
//   double loss(const Eigen::VectorXd& theta);
//   Eigen::VectorXd grad(const Eigen::VectorXd& theta);

struct ScgConfig {
  double sigma = 1e-5;       // finite step for the Hessian-vector estimate
  double lambda_init = 1e-7; // initial scaling parameter
};

struct ScgState {
  Eigen::VectorXd theta;
  Eigen::VectorXd r; // negative gradient at theta
  Eigen::VectorXd p; // search direction
  double loss_value = 0.0;
  double lambda = 0.0;
  double lambda_bar = 0.0;
  double delta = 0.0; // p^T H p estimate, kept across rejected steps
  double sigma = 1e-5;
  bool success = true;
  long iter = 0;
  long restart_every = 0; // dimension of theta
};

struct ScgStepInfo {
  bool accepted = false;
  double comparison = 0.0; // Delta, the quadratic-model agreement
  double step_size = 0.0;
};

template <class Objective>
ScgState scg_init(Eigen::VectorXd theta0, Objective& f,
                  const ScgConfig& cfg = {}) {
  ScgState s;
  s.theta = std::move(theta0);
  s.loss_value = f.loss(s.theta);
  s.r = -f.grad(s.theta);
  s.p = s.r;
  s.lambda = cfg.lambda_init;
  s.sigma = cfg.sigma;
  s.restart_every = s.theta.size();
  return s;
}

template <class Objective>
ScgStepInfo scg_step(ScgState& s, Objective& f) {
  ScgStepInfo info;
  const double r_norm2 = s.r.squaredNorm();
  if (r_norm2 == 0.0) return info; // stationary point, model unchanged

  // Keep p a descent direction; restart on steepest descent otherwise.
  if (s.p.dot(s.r) <= 0.0) {
    s.p = s.r;
    s.success = true;
  }
  const double p_norm2 = s.p.squaredNorm();

  if (s.success) {
    const double sigma_k = s.sigma / std::sqrt(p_norm2);
    const Eigen::VectorXd grad_here = -s.r;
    const Eigen::VectorXd grad_shift = f.grad(s.theta + sigma_k * s.p);
    s.delta = s.p.dot((grad_shift - grad_here) / sigma_k);
  }
  s.delta += (s.lambda - s.lambda_bar) * p_norm2;
  if (s.delta <= 0.0) { // force the scaled Hessian positive definite
    s.lambda_bar = 2.0 * (s.lambda - s.delta / p_norm2);
    s.delta = -s.delta + s.lambda * p_norm2;
    s.lambda = s.lambda_bar;
  }

  const double mu = s.p.dot(s.r);
  const double alpha = mu / s.delta;
  const Eigen::VectorXd theta_try = s.theta + alpha * s.p;
  const double loss_try = f.loss(theta_try);
  if (!std::isfinite(loss_try))
    throw std::runtime_error("scg: non-finite loss at trial point");
  const double comparison = 2.0 * s.delta * (s.loss_value - loss_try) / (mu * mu);
  info.comparison = comparison;
  info.step_size = alpha;

  if (comparison >= 0.0) { // accept
    info.accepted = true;
    s.theta = theta_try;
    s.loss_value = loss_try;
    const Eigen::VectorXd r_new = -f.grad(s.theta);
    s.lambda_bar = 0.0;
    s.success = true;
    if ((s.iter + 1) % s.restart_every == 0) {
      s.p = r_new;
    } else {
      const double beta = (r_new.squaredNorm() - r_new.dot(s.r)) / mu;
      s.p = r_new + beta * s.p;
    }
    s.r = r_new;
    if (comparison >= 0.75) s.lambda *= 0.25;
  } else { // reject: theta unchanged, scaling increased
    s.lambda_bar = s.lambda;
    s.success = false;
  }
  if (comparison < 0.25) s.lambda += s.delta * (1.0 - comparison) / p_norm2;
  ++s.iter;
  return info;
}

}  // namespace roadsurf
