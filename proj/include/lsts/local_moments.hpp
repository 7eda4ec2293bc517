#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lsts/kernels.hpp"
#include "lsts/process_models.hpp"

namespace lsts {

struct LocalEstimate {
  Eigen::VectorXd value;
  double u0 = 0.0;
  double bandwidth = 0.0;
  std::string estimator;
  std::optional<Eigen::VectorXd> standard_error;
  //! Effective window in rescaled time after clipping to [0,1].
  double window_lo = 0.0;
  double window_hi = 1.0;
  bool edge = false;
  //! Innovation variance for Yule-Walker type estimates.
  std::optional<double> sigma2;
  //! Estimated local covariance matrix R(u0) for Yule-Walker type estimates.
  Eigen::MatrixXd gram;
};

//! Taper-weighted data segment about u0: entries h(s/N) X_{[u0 T] - N/2 + s},
//! s = 1..N, with out-of-range times set to zero.
struct TaperedSegment {
  std::vector<double> weighted;
  long first_time = 1;  // time index of s = 1
  double H = 0.0;       // sum of h(s/N)^2 over retained s
  long retained_lo = 0;
  long retained_hi = 0;
  bool clipped = false;
};

TaperedSegment taper_segment(const Realization& data, double u0, long N, const Taper& taper);

//! Same with the time index of s = 1 given directly.
TaperedSegment taper_segment_from(const Realization& data, long first_time, long N,
                                  const Taper& taper);

//! c^(u0,k) for k = 0..max_lag from one tapered segment.
Eigen::VectorXd tapered_autocovariances(const TaperedSegment& seg, long max_lag);

LocalEstimate tapered_local_covariance(const Realization& data, double u0, long k, long N,
                                       const Taper& taper);

//! Centered kernel form (1/bT) sum_t K((u0 - (t + k/2)/T)/b) X_t X_{t+k}.
LocalEstimate kernel_local_covariance(const Realization& data, double u0, long k, double b,
                                      const Kernel& kernel);

struct LaggedPair {
  long i;
  long j;
};

//! Lagged-product form (1/bT) sum_t K((u0 - t/T)/b) X_{t-i} X_{t-j}.
LocalEstimate kernel_local_covariance(const Realization& data, double u0, LaggedPair ij,
                                      double b, const Kernel& kernel);

struct TaperWindow {
  long N;
  Taper taper = Taper::sine_squared();
};
struct KernelWindow {
  double b;
  Kernel kernel = Kernel::canonical_quadratic();
};
//! Regression-type window: R_ij and r_i from lagged products X_{t-i} X_{t-j}.
struct LaggedKernelWindow {
  double b;
  Kernel kernel = Kernel::canonical_quadratic();
};
using Window = std::variant<TaperWindow, KernelWindow, LaggedKernelWindow>;

//! alpha^ = -R^{-1} r^, sigma^2 = c^(0) + alpha^' r^.
LocalEstimate local_yule_walker(const Realization& data, double u0, int p, const Window& window);

struct MseComponents {
  double mu;   // d^2/du^2 c(u0,k)
  double tau;  // sum_l c(u0,l) [c(u0,l) + c(u0,l+2k)]
};

MseComponents covariance_mse_components(const TvModelSpec& spec, double u0, long k);

struct BandwidthChoice {
  double b;
  double unclipped_b;
  bool clipped;
  //! Asymptotic MSE at the optimum and its T^{4/5}-scaled constant.
  double mse;
  double scaled_mse;
};

//! b = (v_K/d_K^2)^{1/5} (tau/mu^2)^{1/5} T^{-1/5}, clipped to (0,1].
BandwidthChoice optimal_bandwidth(double mu, double tau, const Kernel& kernel, long T);

//! tvARCH(0): local variance estimate of alpha_0, tau = 2 alpha_0^2, mu = alpha_0''.
BandwidthChoice optimal_bandwidth_tvarch0(const TvModelSpec& spec, double u0,
                                          const Kernel& kernel, long T);

struct YwAsymptotics {
  Eigen::VectorXd alpha;
  double sigma2;
  Eigen::MatrixXd R;
  //! R^{-1} [R'' alpha + r''];  E alpha^ = alpha - (b^2/2) d_K mu.
  Eigen::VectorXd mu;
  Eigen::VectorXd bias;
  //! v_K sigma^2 R^{-1} / (bT)
  Eigen::MatrixXd variance;
  //! sigma^2 tr R^{-1}
  double tau;
};

YwAsymptotics yw_asymptotics(const TvModelSpec& spec, double u0, int p, const Kernel& kernel,
                             double b, long T);

struct SegmentLengthChoice {
  double N;
  Eigen::VectorXd mu;
  double tau;
};

//! Optimal segment length from autocovariances c(t, 0..p) at t0, t0-1, t0-2 of a
//! non-rescaled tvAR(p). `T` is the internal rescaling; the result does not depend on it.
SegmentLengthChoice optimal_segment_length_nonrescaled(const Eigen::VectorXd& c_t0,
                                                       const Eigen::VectorXd& c_t1,
                                                       const Eigen::VectorXd& c_t2, int p,
                                                       const Kernel& kernel, double T = 1000.0);

//! Toeplitz R (p x p) and r (p) from autocovariances c(0..p).
void toeplitz_system(const Eigen::VectorXd& c, int p, Eigen::MatrixXd& R, Eigen::VectorXd& r);

//! Solves R x = rhs for symmetric positive definite R; throws RankError carrying
//! the condition number when R is singular or numerically so.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& R, const Eigen::VectorXd& rhs);

}  // namespace lsts
