#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsts/curve.hpp"
#include "lsts/random.hpp"

namespace lsts {

enum class Family { tvAR, tvARMA, tvARCH };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

//! Time-varying AR / ARMA / ARCH model on rescaled time.
//!
//!  tvAR:   X_t + sum_j alpha_j(t/T) X_{t-j} = sigma(t/T) eps_t
//!  tvARMA: sum_{j=0}^p alpha_j(t/T) X_{t-j}
//!            = sum_{k=0}^q beta_k(t/T) sigma((t-k)/T) eps_{t-k},  alpha_0 = beta_0 = 1
//!  tvARCH: X_t = s_t eps_t,  s_t^2 = alpha_0(t/T) + sum_{j>=1} alpha_j(t/T) X_{t-j}^2
//!
//! For tvAR/tvARMA `alpha` holds alpha_1..alpha_p and `beta` holds beta_1..beta_q.
//! For tvARCH `alpha` holds alpha_0..alpha_p and `sigma` is unused.
//! The mean curve mu is added to the zero-mean recursion output.
struct TvModelSpec {
  Family family = Family::tvAR;
  std::vector<ParameterCurve> alpha;
  std::vector<ParameterCurve> beta;
  ParameterCurve sigma = ParameterCurve::constant(1.0);
  ParameterCurve mu = ParameterCurve::constant(0.0);
  InnovationSpec innovations;

  int p() const;
  int q() const { return static_cast<int>(beta.size()); }

  //! alpha_1(u)..alpha_p(u) (tvAR/tvARMA) or alpha_0(u)..alpha_p(u) (tvARCH).
  Eigen::VectorXd alpha_at(double u) const;
  Eigen::VectorXd beta_at(double u) const;
  bool has_constant_curves() const;
};

TvModelSpec make_tvar(std::vector<ParameterCurve> alpha,
                      ParameterCurve sigma = ParameterCurve::constant(1.0));

//! tvAR(2) with alpha_1(u) = -1.8 cos(1.5 - cos 4 pi u), alpha_2 = 0.81, sigma = 1:
//! roots (1/0.9) exp(+-i(1.5 - cos 4 pi u)), spectral peak sweeping in time.
TvModelSpec sweeping_peak_tvar2();

struct Realization {
  enum class Origin { simulated, ingested };
  Eigen::VectorXd values;
  Origin origin = Origin::ingested;
  std::uint64_t seed = 0;

  Eigen::Index T() const { return values.size(); }
  //! 1-based access X_{t,T}.
  double at(long t) const { return values[t - 1]; }
};

struct SimulationOptions {
  int burn_in = 500;
  int stability_grid = 201;
  double stability_delta = 1e-3;
};

//! Throws StabilityError (tvAR/tvARMA roots, tvARCH positivity/summability).
void check_stability(const TvModelSpec& spec, int grid_size = 201, double delta = 1e-3);

Realization simulate(const TvModelSpec& spec, long T, std::uint64_t seed,
                     const SimulationOptions& options = {});

//! Frozen-coefficient process X~_t(u0), t = 1..T, on the innovation stream of simulate.
Realization stationary_approximation(const TvModelSpec& spec, double u0, long T,
                                     std::uint64_t seed, const SimulationOptions& options = {});

struct DerivativeProcess {
  Realization series;
  int truncation_lag;
  //! sum_{j>J} j rho^{j-1} with rho = |alpha_1(u0)|.
  double tail_bound;
};

//! d/du X~_t(u) at u0 for tvAR(1), truncated MA form
//!   sum_{j=0}^{J} [ sigma'(u0) (-a)^j + sigma(u0) (-1)^j j a^{j-1} a' ] eps_{t-j}.
//! J <= 0 selects ceil(log(1e-10)/log rho).
DerivativeProcess derivative_process_tvar1(const TvModelSpec& spec, double u0, long T,
                                           std::uint64_t seed, int J = 0);

//! Roots modulus minus one of 1 + sum_j a_j z^j; +inf when the polynomial is constant.
double ar_root_margin(const Eigen::VectorXd& a);

//! Smallest root modulus minus 1 of the AR polynomial over grid_size equispaced u.
double stability_margin(const TvModelSpec& spec, int grid_size = 201);

double tv_spectral_density(const TvModelSpec& spec, double u, double lambda);

//! c(u,k) = int e^{ik lambda} f(u,lambda) d lambda.
double tv_covariance(const TvModelSpec& spec, double u, long k);

//! c(u,0..max_lag) from one FFT of f(u,.) on `nodes` equispaced frequencies.
Eigen::VectorXd tv_autocovariances(const TvModelSpec& spec, double u, long max_lag,
                                   int nodes = 4096);

//! Coefficients a(u,j), j = 0..J, of the one-sided MA representation
//! X~_t(u) = sum_j a(u,j) eps_{t-j}.
Eigen::VectorXd ma_coefficients(const TvModelSpec& spec, double u, int J);

//! Transfer function A(u,lambda) = sum_j a(u,j) e^{-i j lambda}; 2 pi |A|^2 = 4 pi^2 f.
std::complex<double> transfer_function(const TvModelSpec& spec, double u, double lambda);

}  // namespace lsts
