#pragma once

#include <functional>
#include <span>
#include <vector>

namespace voipstat::evt {

struct NewtonOptions {
  double tol = 1e-8;        // on the largest component of the full Newton step
  int max_iter = 200;
  int max_halvings = 30;
  double rel_step = 1e-6;   // finite-difference step relative to max(|theta_j|, scale_j)
};

struct NewtonResult {
  std::vector<double> theta;
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;
  bool converged = false;
  double last_step = 0.0;  // max |delta| of the last full step
};

/// Objective to maximize; -inf marks points outside the feasible set.
using Objective = std::function<double(std::span<const double>)>;

/// Damped Newton-Raphson ascent for small parameter vectors (dimension <= 4).
///
/// Gradient v and Hessian are central finite differences of `f`. The step is
/// delta = H^-1 v with H = -d2f, or a diagonally scaled gradient step when H is
/// not positive definite. Each step is halved until f is finite and does not
/// decrease, so f(result) >= f(theta0) always holds. Converges when the
/// largest component of the full step drops below `tol`.
///
/// `scales` gives the magnitude below which a parameter's finite-difference
/// step stops shrinking with |theta_j|.
NewtonResult maximize_newton(const Objective& f, std::vector<double> theta0,
                             std::span<const double> scales, const NewtonOptions& options = {});

}  // namespace voipstat::evt
