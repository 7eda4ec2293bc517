#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsts/process_models.hpp"

namespace lsts {

//! Index function phi(u, lambda) on [0,1] x [-pi,pi] with an optional data taper h(u).
class IndexFunction {
 public:
  enum class Kind { analytic, grid_sampled };

  static IndexFunction analytic(std::function<double(double, double)> phi,
                                bool time_invariant = false, std::string name = "analytic");
  //! Bilinear interpolation of values(i,j) at (u[i], lambda[j]); lambda in [-pi,pi]
  //! or [0,pi] (then extended evenly).
  static IndexFunction sampled(Eigen::VectorXd u, Eigen::VectorXd lambda, Eigen::MatrixXd values);
  //! cos(lambda k), time-invariant.
  static IndexFunction cosine(long k);
  //! (1{v <= u} - u) 1{0 <= mu <= lambda}, the stationarity-test index.
  static IndexFunction stationarity_indicator(double u, double lambda);

  IndexFunction with_taper(std::function<double(double)> h) const;

  Kind kind() const { return kind_; }
  bool time_invariant() const { return time_invariant_; }
  const std::string& name() const { return name_; }
  double operator()(double u, double lambda) const { return phi_(u, lambda); }
  bool has_taper() const { return static_cast<bool>(taper_); }
  double taper(double u) const { return taper_ ? taper_(u) : 1.0; }
  const std::function<double(double)>& taper_function() const { return taper_; }

 private:
  Kind kind_ = Kind::analytic;
  std::function<double(double, double)> phi_;
  std::function<double(double)> taper_;
  bool time_invariant_ = false;
  std::string name_;
};

//! F_T(phi) = (1/T) sum_t int phi(t/T, lambda) J_T(t/T, lambda) d lambda with the
//! lambda-integral summed on nextpow2(2T) periodic nodes.
double empirical_spectral_measure(const Realization& data, const IndexFunction& phi);

//! Time-invariant phi only: int phi(lambda) I_T(lambda) d lambda (times H_2/T with a taper)
//! from the full-sample periodogram on the same nodes.
double empirical_spectral_measure_periodogram(const Realization& data, const IndexFunction& phi);

struct MeasureQuadrature {
  int u_nodes = 64;
  int lambda_nodes = 256;
};

//! F(phi) = int h(u)^2 int phi(u,lambda) f(u,lambda) d lambda du.
double theoretical_spectral_measure(const TvModelSpec& truth, const IndexFunction& phi,
                                    const MeasureQuadrature& q = {});

//! 2 pi int h^4 int phi_j [phi_k(u,l) + phi_k(u,-l)] f^2 + kappa4 int h^4 (int phi_j f)(int phi_k f).
double limit_covariance(const TvModelSpec& truth, const IndexFunction& phi_j,
                        const IndexFunction& phi_k, const MeasureQuadrature& q = {});

//! (int h^4 int phi^2)^{1/2}
double rho2(const IndexFunction& phi, const MeasureQuadrature& q = {});
//! ((1/T) sum_t int phi(t/T, lambda)^2 d lambda)^{1/2}
double rho2_T(const IndexFunction& phi, long T, int lambda_nodes = 256);

struct StationarityStatistic {
  double value;
  double u_at_max;
  double lambda_at_max;
  //! sqrt(T) |F_T(u,lambda) - u F_T(1,lambda)| on the grid (rows u, columns lambda).
  Eigen::MatrixXd surface;
};

//! Default grids u_i = i/50 (i = 1..50), lambda_j = pi j/64 (j = 1..64).
StationarityStatistic stationarity_statistic(const Realization& data, const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& lambda, bool demean = true);

struct NullCalibration {
  int replications;
  std::uint64_t seed;
  int ar_order;
  Eigen::VectorXd ar_coefficients;
  double sigma2;
  std::string description = "parametric simulation from an AIC-selected stationary AR fit";
};

struct StationarityReport {
  double statistic;
  double u_at_max;
  double lambda_at_max;
  //! rho_2 of the index function at the maximizing (u, lambda).
  double rho2_at_max;
  std::map<double, double> critical_values;
  std::map<double, bool> reject;
  double p_value;
  NullCalibration calibration;
  int u_points;
  int lambda_points;
  long T;
};

struct StationarityTestOptions {
  int u_points = 50;
  int lambda_points = 64;
  int replications = 500;
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::uint64_t seed = 1;
  int max_ar_order = 10;
  bool demean = true;
};

//! Stationary AR(p) fit by Yule-Walker on the demeaned sample with p <= max_order chosen
//! by AIC = log sigma2 + 2(p+1)/T.
struct ArFit {
  int p;
  Eigen::VectorXd alpha;
  double sigma2;
  double aic;
};
ArFit fit_stationary_ar(const Realization& data, int max_order = 10);

StationarityReport stationarity_test(const Realization& data,
                                     const StationarityTestOptions& options = {});

}  // namespace lsts
