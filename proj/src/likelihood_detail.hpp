#pragma once

#include <Eigen/Dense>

#include "lsts/likelihoods.hpp"

namespace lsts::detail {

//! (1/4pi) int log 4 pi^2 f d lambda for f = sigma2 / (2 pi |1 + sum alpha_j e^{-ij lambda}|^2).
double ar_log_term(const Eigen::VectorXd& alpha, double sigma2);

//! (1/4pi)(2pi/M) sum_j {weight log 4 pi^2 f(lambda_j) + I_j / f(lambda_j)}, lambda_j = 2 pi j/M.
double whittle_grid_sum(const Eigen::VectorXd& I, double weight, const LocalSpectralModel& model,
                        const Eigen::VectorXd& theta);

//! P_t(k) on a 0-based series; zero when a factor falls outside 1..T.
double lag_product(const Eigen::VectorXd& x, long t, long k);

}  // namespace lsts::detail
