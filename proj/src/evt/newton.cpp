#include "voipstat/evt/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "voipstat/error.hpp"

namespace voipstat::evt {

namespace {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

// Cholesky solve of A x = b for symmetric A; false unless A is positive definite.
bool cholesky_solve(Mat a, const Vec& b, Vec& x) {
  const std::size_t n = b.size();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    a[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      a[i][j] = s / a[j][j];
    }
  }
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * y[k];
    y[i] = s / a[i][i];
  }
  x.assign(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k][ii] * x[k];
    x[ii] = s / a[ii][ii];
  }
  return true;
}

struct Derivatives {
  Vec grad;
  Mat neg_hessian;
  bool grad_ok = true;
  bool hess_ok = true;
};

Derivatives differentiate(const Objective& f, const Vec& theta, double f0, const Vec& h) {
  const std::size_t n = theta.size();
  Derivatives d;
  d.grad.assign(n, 0.0);
  d.neg_hessian.assign(n, Vec(n, 0.0));
  Vec p = theta;
  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    p = theta;
    p[i] += di;
    p[j] += dj;
    return f(p);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = eval(i, h[i], i, 0.0);
    const double fm = eval(i, -h[i], i, 0.0);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      d.grad_ok = false;
      d.hess_ok = false;
      continue;
    }
    d.grad[i] = (fp - fm) / (2.0 * h[i]);
    d.neg_hessian[i][i] = -(fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  if (!d.hess_ok) return d;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double fpp = eval(i, h[i], j, h[j]);
      const double fpm = eval(i, h[i], j, -h[j]);
      const double fmp = eval(i, -h[i], j, h[j]);
      const double fmm = eval(i, -h[i], j, -h[j]);
      const double v = -(fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      if (!std::isfinite(v)) d.hess_ok = false;
      d.neg_hessian[i][j] = v;
      d.neg_hessian[j][i] = v;
    }
  }
  return d;
}

}  // namespace

NewtonResult maximize_newton(const Objective& f, std::vector<double> theta0, std::span<const double> scales,
                             const NewtonOptions& options) {
  const std::size_t n = theta0.size();
  if (scales.size() != n) throw Error(ErrorCode::BadInput, "one scale per parameter required");

  NewtonResult r;
  r.theta = std::move(theta0);
  r.value = f(r.theta);
  r.initial_value = r.value;
  if (!std::isfinite(r.value)) throw Error(ErrorCode::DomainError, "initial point is infeasible");

  Vec h(n);
  for (r.iterations = 0; r.iterations < options.max_iter;) {
    for (std::size_t j = 0; j < n; ++j) {
      h[j] = options.rel_step * std::max(std::fabs(r.theta[j]), scales[j]);
    }
    Derivatives d = differentiate(f, r.theta, r.value, h);
    if (!d.grad_ok) {
      // Too close to the feasibility boundary for symmetric differences.
      r.last_step = std::numeric_limits<double>::infinity();
      break;
    }

    Vec delta;
    if (!d.hess_ok || !cholesky_solve(d.neg_hessian, d.grad, delta)) {
      delta.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double curvature = std::fabs(d.neg_hessian[j][j]);
        delta[j] = (curvature > 0.0 && std::isfinite(curvature)) ? d.grad[j] / curvature
                                                                  : d.grad[j] * scales[j] * scales[j];
      }
    }

    double step = 0.0;
    for (double x : delta) step = std::max(step, std::fabs(x));
    r.last_step = step;
    if (!std::isfinite(step)) break;

    // Damped update: halve until the objective is finite and not worse.
    bool accepted = false;
    double scale = 1.0;
    Vec trial(n);
    for (int k = 0; k <= options.max_halvings; ++k, scale *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = r.theta[j] + scale * delta[j];
      const double value = f(trial);
      if (std::isfinite(value) && value >= r.value) {
        r.theta = trial;
        r.value = value;
        accepted = true;
        break;
      }
    }
    ++r.iterations;
    if (step < options.tol) {
      r.converged = true;
      break;
    }
    if (!accepted) break;
  }
  return r;
}

}  // namespace voipstat::evt
