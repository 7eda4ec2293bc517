#include "lsts/optimize.hpp"

#include <cmath>
#include <limits>

#include "lsts/errors.hpp"

namespace lsts {

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

OptimizerResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0,
                              const OptimizerOptions& options) {
  const Eigen::Index n = x0.size();
  OptimizerResult res{x0, f(x0), 0, false};
  if (!std::isfinite(res.value)) throw DomainError("objective is not finite at the starting point");
  if (n == 0) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd x = x0;
  double fx = res.value;
  Eigen::VectorXd g = numerical_gradient(f, x, options.fd_step);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  // Scale the initial inverse Hessian so the first step is modest.
  const double gn0 = g.norm();
  if (gn0 > 1.0) H /= gn0;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (!g.allFinite()) break;
    if (g.norm() < options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd d = -H * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      H.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    double fnew = std::numeric_limits<double>::infinity();
    Eigen::VectorXd xnew;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xnew = x + step * d;
      fnew = f(xnew);
      if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease along d: either at the noise floor of the objective or stuck.
      res.converged = g.norm() < 1e3 * options.gradient_tolerance;
      break;
    }
    const Eigen::VectorXd s = xnew - x;
    const Eigen::VectorXd gnew = numerical_gradient(f, xnew, options.fd_step);
    const Eigen::VectorXd y = gnew - g;
    x = xnew;
    const double fold = fx;
    fx = fnew;
    g = gnew;
    if (s.norm() < options.step_tolerance * (1.0 + x.norm()) &&
        std::abs(fold - fx) <= 1e-15 * (1.0 + std::abs(fx))) {
      res.converged = g.norm() < 1e3 * options.gradient_tolerance;
      ++it;
      break;
    }
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      if (it == 0) H *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
  }
  res.x = x;
  res.value = fx;
  res.iterations = it;
  return res;
}

}  // namespace lsts
