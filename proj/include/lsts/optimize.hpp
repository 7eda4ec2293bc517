#pragma once

#include <functional>

#include <Eigen/Dense>

namespace lsts {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimizerOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-7;
  double step_tolerance = 1e-9;
  //! Central-difference step is fd_step * (1 + |x_i|).
  double fd_step = 1e-6;
};

struct OptimizerResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double step);

//! BFGS with Armijo backtracking and central-difference gradients. Non-finite
//! objective values act as a barrier: the line search backs off from them.
OptimizerResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0,
                              const OptimizerOptions& options = {});

}  // namespace lsts
