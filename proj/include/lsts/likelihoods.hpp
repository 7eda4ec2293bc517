#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsts/kernels.hpp"
#include "lsts/optimize.hpp"
#include "lsts/process_models.hpp"

namespace lsts {

//! tvAR(p) curve model with polynomial curves
//!   alpha_j(u) = sum_{k=0}^{K_j} b_{jk} u^k,  sigma^2(u) = sum_k s_k u^k,  mu(u) = sum_k m_k u^k.
//! Parameter layout: [b_1., ..., b_p., s_., m_.]. `mean_order = -1` means mu = 0;
//! `fixed_sigma2` removes the s block and holds sigma^2 at the given value.
class CurveModel {
 public:
  CurveModel(int p, std::vector<int> alpha_orders, int sigma2_order = 0, int mean_order = -1,
             std::optional<double> fixed_sigma2 = std::nullopt);

  //! All curves constant.
  static CurveModel stationary_ar(int p, bool with_mean = false);

  int p() const { return p_; }
  const std::vector<int>& alpha_orders() const { return alpha_orders_; }
  int sigma2_order() const { return sigma2_order_; }
  int mean_order() const { return mean_order_; }
  const std::optional<double>& fixed_sigma2() const { return fixed_sigma2_; }
  bool has_mean() const { return mean_order_ >= 0; }
  bool is_stationary() const;
  int dim() const;
  //! Number of alpha coefficients, sum (K_j + 1).
  int alpha_dim() const;
  int sigma2_offset() const { return alpha_dim(); }
  int mean_offset() const;
  std::vector<std::string> parameter_names() const;

  Eigen::VectorXd alpha(const Eigen::VectorXd& eta, double u) const;
  double sigma2(const Eigen::VectorXd& eta, double u) const;
  double mean(const Eigen::VectorXd& eta, double u) const;
  //! theta_eta(u) = (alpha_1..alpha_p, sigma^2).
  Eigen::VectorXd theta(const Eigen::VectorXd& eta, double u) const;
  double spectral_density(const Eigen::VectorXd& eta, double u, double lambda) const;
  //! gamma_k = sum_j a_j a_{j+k}, k = 0..p, with a_0 = 1; then
  //! int e^{ik lambda} f^{-1} d lambda = 4 pi^2 gamma_k / sigma^2.
  Eigen::VectorXd inverse_spectrum_coefficients(const Eigen::VectorXd& eta, double u) const;
  //! Positive sigma^2 on a probe grid.
  bool valid(const Eigen::VectorXd& eta, int grid = 101) const;
  double stability_margin(const Eigen::VectorXd& eta, int grid = 101) const;
  //! Smallest singular value of the Jacobian of eta -> (log f_eta, mu_eta) on a
  //! probe grid; the model is locally identifiable when it exceeds 1e-8.
  double identifiability(const Eigen::VectorXd& eta, int u_nodes = 9, int lambda_nodes = 16) const;

  TvModelSpec to_spec(const Eigen::VectorXd& eta) const;
  //! Coefficients of the curves of a polynomial/constant spec (for tests).
  Eigen::VectorXd eta_from_spec(const TvModelSpec& spec) const;

 private:
  int p_;
  std::vector<int> alpha_orders_;
  int sigma2_order_;
  int mean_order_;
  std::optional<double> fixed_sigma2_;
};

struct FitResult {
  Eigen::VectorXd eta;
  double objective = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<Eigen::MatrixXd> covariance;
  std::optional<double> aic;
  std::optional<double> sigma2;
  std::string method;
  std::vector<std::string> names;
  //! Local polynomial fits: row m holds c_m, the coefficient of (t/T - u0)^m.
  std::optional<Eigen::MatrixXd> local_coefficients;
};

// ---------------------------------------------------------------------------
// Local (single time point) likelihoods

//! Stationary spectral family f_theta(lambda) used by the local likelihoods.
struct LocalSpectralModel {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&, double)> density;
  std::vector<std::string> names;
  //! AR order when the family is AR(p) with theta = (alpha, sigma^2); -1 otherwise.
  int ar_order = -1;

  static LocalSpectralModel tvar(int p);
  static LocalSpectralModel white_noise();
};

//! (1/4pi) int {log 4 pi^2 f_theta + I_T(u0,.)/f_theta} by summation over the Fourier
//! grid of size nextpow2(2N); +inf when f_theta <= 0 anywhere on the grid.
double local_whittle_likelihood(const Realization& data, double u0, const Eigen::VectorXd& theta,
                                const LocalSpectralModel& model, long N,
                                const Taper& taper = Taper::sine_squared());

struct LocalFitOptions {
  //! Defaults to the local Yule-Walker estimate (AR families) or the flat spectrum.
  std::optional<Eigen::VectorXd> start;
  OptimizerOptions optimizer{500, 1e-9, 1e-12, 1e-5};
};

//! AR families are fitted over the causal region only.
FitResult local_whittle_fit(const Realization& data, double u0, const LocalSpectralModel& model,
                            long N, const Taper& taper = Taper::sine_squared(),
                            const LocalFitOptions& options = {});

//! Kernel-weighted pre-periodogram likelihood about u0,
//! (1/4pi)(1/T) sum_t (1/b) K((u0 - t/T)/b) int {log 4 pi^2 f_theta + J_T(t/T,.)/f_theta}.
double local_generalized_whittle_likelihood(const Realization& data, double u0,
                                            const Eigen::VectorXd& theta,
                                            const LocalSpectralModel& model, double b,
                                            const Kernel& kernel = Kernel::canonical_quadratic());

FitResult local_generalized_whittle_fit(const Realization& data, double u0,
                                        const LocalSpectralModel& model, double b,
                                        const Kernel& kernel = Kernel::canonical_quadratic(),
                                        const LocalFitOptions& options = {});

enum class ConditionalFamily { tvAR, tvARCH };

//! Local polynomial conditional likelihood of degree d about u0 with kernel weights
//! (1/bT) K((u0 - t/T)/b). tvAR: closed-form weighted least squares for alpha and a
//! weighted mean of squared residuals for sigma^2. tvARCH: quasi-Newton with a barrier
//! on w_t <= 0; closed form for p = 0, d = 0.
//! eta holds theta^(u0) = c_0: (alpha_1..alpha_p, sigma^2) or (alpha_0..alpha_p).
FitResult local_conditional_fit(const Realization& data, double u0, double b, const Kernel& kernel,
                                ConditionalFamily family, int p, int d = 0);

// ---------------------------------------------------------------------------
// Global likelihoods for curve models

//! Classical Whittle likelihood of a time-constant model on a padded Fourier grid.
double classical_whittle_likelihood(const Realization& data, const CurveModel& model,
                                    const Eigen::VectorXd& eta);

struct BlockWhittleOptions {
  Taper taper = Taper::sine_squared();
  //! Adds two half-length periodograms at the sample edges.
  bool edge_segments = false;
  OptimizerOptions optimizer{};
  bool cross_check = false;
};

//! Segment start times S(j-1)+1, j = 1..M, with T = S(M-1) + N; throws SegmentationError.
std::vector<long> block_segment_starts(long T, long N, long S);

double block_whittle_likelihood(const Realization& data, const CurveModel& model,
                                const Eigen::VectorXd& eta, long N, long S,
                                const BlockWhittleOptions& options = {});

//! Closed-form weighted least squares when sigma^2 is constant and mu = 0; the generic
//! optimizer otherwise. With `cross_check` both run and must agree to 1e-6.
FitResult block_whittle_fit(const Realization& data, const CurveModel& model, long N, long S,
                            const BlockWhittleOptions& options = {});

enum class GwRoute { lags, grid, matrix };

//! (1/T) sum_t (1/4pi) int {log 4 pi^2 f_eta(t/T,.) + J_T(t/T,.)/f_eta(t/T,.)} on X - mu_eta.
//! lags: closed-form lambda-integral per t; grid: Fourier summation on nextpow2(2T+p) nodes;
//! matrix: quadratic form (1/(8 pi^2 T)) (X-mu)' U_T(f^{-1}) (X-mu).
double generalized_whittle_likelihood(const Realization& data, const CurveModel& model,
                                      const Eigen::VectorXd& eta, GwRoute route = GwRoute::lags);

struct GlobalFitOptions {
  std::optional<Eigen::VectorXd> start;
  OptimizerOptions optimizer{};
  //! Re-evaluates the optimum by the grid and matrix routes and requires 1e-8 agreement.
  bool cross_check = false;
};

//! Start value from local Yule-Walker estimates on a grid plus least squares.
Eigen::VectorXd curve_model_warm_start(const Realization& data, const CurveModel& model);

FitResult generalized_whittle_fit(const Realization& data, const CurveModel& model,
                                  const GlobalFitOptions& options = {});

enum class SigmaAssembly {
  //! Sigma_T(A_eta, A_eta) from the one-sided MA coefficients at each row time.
  transfer,
  //! c([(r+s)/2]/T, r-s) from the frozen-coefficient autocovariances.
  midpoint
};

struct ExactOptions {
  long max_T = 2048;
  SigmaAssembly assembly = SigmaAssembly::transfer;
};

Eigen::MatrixXd model_covariance_matrix(const CurveModel& model, const Eigen::VectorXd& eta,
                                        long T, SigmaAssembly assembly = SigmaAssembly::transfer);

//! (1/2) log 2pi + (1/2T) log det Sigma + (1/2T) (X-mu)' Sigma^{-1} (X-mu).
double exact_gaussian_likelihood(const Realization& data, const CurveModel& model,
                                 const Eigen::VectorXd& eta, const ExactOptions& options = {});

//! Quasi-Newton from the generalized Whittle estimate; a constant sigma^2 is profiled out.
FitResult exact_mle_fit(const Realization& data, const CurveModel& model,
                        const GlobalFitOptions& options = {}, const ExactOptions& exact = {});

// ---------------------------------------------------------------------------
// Model selection

//! log sigma2 + 2 (p + 1 + sum K_j) / T.
double aic(double sigma2, int p, const std::vector<int>& orders, long T);
double aic(const FitResult& fit, const CurveModel& model, long T);

struct ScanEntry {
  int p;
  std::vector<int> orders;
  double sigma2;
  double aic;
};

struct ModelScan {
  std::vector<ScanEntry> table;
  std::size_t best;
};

//! Block Whittle closed-form fits for all p in 1..p_max and K_j in 0..K_max.
ModelScan model_scan(const Realization& data, int p_max, int K_max, long N, long S,
                     const Taper& taper = Taper::sine_squared());

// ---------------------------------------------------------------------------
// Asymptotic quantities

struct LimitQuadrature {
  int u_nodes = 64;
  int lambda_nodes = 256;
};

//! (1/4pi) int int {log 4 pi^2 f_eta + f/f_eta} + (1/4pi) int (mu_eta - mu)^2 / f_eta(u,0).
double kl_divergence_limit(const CurveModel& model, const Eigen::VectorXd& eta,
                           const TvModelSpec& truth, const LimitQuadrature& q = {});

struct AsymptoticCovariance {
  Eigen::MatrixXd Gamma;
  Eigen::MatrixXd V;
  //! Gamma^{-1} V Gamma^{-1}
  Eigen::MatrixXd sandwich;
};

//! Gamma and V with central-difference derivatives of f_eta; a mean curve adds the
//! Fisher term (1/2pi) int grad mu grad mu' / f(u,0) to both.
AsymptoticCovariance asymptotic_covariance(const CurveModel& model, const Eigen::VectorXd& eta0,
                                           const TvModelSpec& truth,
                                           const LimitQuadrature& q = {});

// ---------------------------------------------------------------------------
// Sigma_T / U_T matrices

using TransferFunction = std::function<std::complex<double>(double u, double lambda)>;
using IndexSurface = std::function<double(double u, double lambda)>;

//! Sigma_T(A,B)_{rs} = (1/2pi) int e^{i lambda (r-s)} A(r/T, lambda) B(s/T, -lambda) d lambda,
//! real part, by 4096-node periodic quadrature.
Eigen::MatrixXd build_sigma_matrix(const TransferFunction& A, const TransferFunction& B, long T,
                                   int nodes = 4096);
Eigen::MatrixXd build_sigma_matrix(const TvModelSpec& spec, long T);

//! U_T(phi)_{rs} = int e^{i lambda (r-s)} phi([(r+s)/2]/T, lambda) d lambda, real part.
Eigen::MatrixXd build_u_matrix(const IndexSurface& phi, long T, int nodes = 4096);

//! (1/T) || Sigma_T(A,A)^{-1} - U_T({2 pi A conj(A)}^{-1}) ||_F^2
double matrix_approximation_gap(const TvModelSpec& spec, long T);
//! (1/T) log det Sigma_T - (1/2pi) int int log(2 pi f) d lambda du
double szego_check(const TvModelSpec& spec, long T);

}  // namespace lsts
