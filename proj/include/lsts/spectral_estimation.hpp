#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lsts/kernels.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/process_models.hpp"

namespace lsts {

//! Values on a rectangular (u, lambda) grid; rows follow u, columns lambda.
struct SpectralGrid {
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd values;
  std::string quantity = "fhat";
  double b_t = 0.0;
  double b_f = 0.0;
  std::string taper;
  std::string kernel_t;
  std::string kernel_f;
};

//! Equispaced nodes; `lambda_grid(n)` returns pi j / n, j = 0..n (closed [0, pi]).
Eigen::VectorXd u_grid(int n, double lo = 0.0, double hi = 1.0);
Eigen::VectorXd lambda_grid(int n);
//! Fourier frequencies 2 pi j / n, j = 0..n-1.
Eigen::VectorXd fourier_frequencies(long n);

//! Tapered periodogram of the segment about u0,
//! I(u0,lambda) = |sum_s h(s/N) X_{[u0T]-N/2+s} e^{-i lambda s}|^2 / (2 pi H_N).
class SegmentPeriodogram {
 public:
  explicit SegmentPeriodogram(TaperedSegment seg) : seg_(std::move(seg)) {}
  double operator()(double lambda) const;
  //! Values at 2 pi j / M, j = 0..M-1, by FFT of the zero-padded segment (M >= N).
  Eigen::VectorXd on_fourier_grid(long M) const;
  const TaperedSegment& segment() const { return seg_; }
  long N() const { return static_cast<long>(seg_.weighted.size()); }

 private:
  TaperedSegment seg_;
};

SegmentPeriodogram segment_periodogram(const Realization& data, double u0, long N,
                                       const Taper& taper);

//! Untapered full-sample periodogram |sum_t X_t e^{-i lambda t}|^2 / (2 pi T).
Eigen::VectorXd periodogram(const Realization& data, const Eigen::VectorXd& lambda);

//! Time-taper weights h_T(t/T) applied to the data before forming lag products.
using TimeTaper = std::function<double(double)>;

//! Lag products P_t(k) = X_{[t+1/2+k/2]} X_{[t+1/2-k/2]}, k = 0..K, over the
//! admissible range; P_t(-k) = P_t(k).
Eigen::VectorXd lag_products(const Realization& data, long t, const TimeTaper& taper = nullptr);

//! J_T(t/T, lambda) = (1/2pi) [P_t(0) + 2 sum_{k>=1} P_t(k) cos(lambda k)].
Eigen::VectorXd pre_periodogram(const Realization& data, long t, const Eigen::VectorXd& lambda,
                                const TimeTaper& taper = nullptr);

//! All t = 1..T at once (rows t, columns lambda).
Eigen::MatrixXd pre_periodogram_grid(const Realization& data, const Eigen::VectorXd& lambda,
                                     const TimeTaper& taper = nullptr);

//! max_lambda |(1/T) sum_t J_T(t/T, lambda) - I_T(lambda)|
double periodogram_identity_check(const Realization& data, const Eigen::VectorXd& lambda);

struct SmoothingOptions {
  Taper taper = Taper::sine_squared();
  Kernel kernel_f = Kernel::canonical_quadratic();
  //! Subtract the sample mean first; the bias/variance theory assumes mu = 0.
  bool demean = true;
};

//! Segment form: f^(u,lambda) = (1/b_f) int K_f((lambda-mu)/b_f) I(u,mu) dmu with
//! N = round(b_t T) and circular wraparound in frequency.
SpectralGrid smoothed_tv_spectrum(const Realization& data, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& lambda, double b_t, double b_f,
                                  const SmoothingOptions& options = {});

//! Kernel form on the pre-periodogram with time kernel K_t and frequency kernel K_f
//! summed over Fourier frequencies 2 pi j / T.
SpectralGrid smoothed_tv_spectrum_kernel(const Realization& data, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& lambda, double b_t, double b_f,
                                         const Kernel& kernel_t = Kernel::canonical_quadratic(),
                                         const Kernel& kernel_f = Kernel::canonical_quadratic(),
                                         bool demean = true);

struct SpectralBandwidths {
  double b_t;
  double b_f;
  double unclipped_b_t;
  double unclipped_b_f;
  double N_opt;
  double delta_u;
  double delta_lambda;
  //! Optimal relative MSE decays like T^{rate_exponent}.
  double rate_exponent = -2.0 / 3.0;
};

//! b_t = T^{-1/6} (576 pi)^{1/6} (D_l / D_u^5)^{1/12}, b_f with the roles swapped,
//! using |D_u| and |D_l|. b_t is clipped to (0,1], b_f to (0,pi).
SpectralBandwidths optimal_spectral_bandwidths(double delta_u, double delta_lambda, long T);

//! Curvatures D_u = f_uu / f and D_l = f_ll / f by central differences (step 1e-3).
SpectralBandwidths optimal_spectral_bandwidths(const TvModelSpec& spec, double u, double lambda,
                                               long T);

//! True spectrum on a grid (for overlays).
SpectralGrid true_tv_spectrum(const TvModelSpec& spec, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& lambda);

Realization demeaned(const Realization& data);

}  // namespace lsts
