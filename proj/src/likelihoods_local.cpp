#include <cmath>
#include <limits>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"
#include "likelihood_detail.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/spectral_estimation.hpp"

namespace lsts {

using std::numbers::pi;

namespace detail {

double ar_log_term(const Eigen::VectorXd& alpha, double sigma2) {
  if (!(sigma2 > 0.0)) return std::numeric_limits<double>::infinity();
  double v = 0.5 * std::log(2.0 * pi * sigma2);
  if (alpha.size() == 0 || ar_root_margin(alpha) > 0.0) return v;
  // (1/4pi) int log |a|^2 vanishes for a stable polynomial; otherwise integrate.
  const int n = 1024;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double lam = -pi + 2.0 * pi * j / n;
    std::complex<double> a = 1.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      a += alpha[i] * std::polar(1.0, -lam * static_cast<double>(i + 1));
    const double m = std::norm(a);
    if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
    s += std::log(m);
  }
  return v - 0.5 * s / n;
}

double whittle_grid_sum(const Eigen::VectorXd& I, double weight, const LocalSpectralModel& model,
                        const Eigen::VectorXd& theta) {
  const Eigen::Index M = I.size();
  double s = 0.0;
  for (Eigen::Index j = 0; j < M; ++j) {
    const double lam = 2.0 * pi * static_cast<double>(j) / static_cast<double>(M);
    const double f = model.density(theta, lam);
    if (!(f > 0.0) || !std::isfinite(f)) return std::numeric_limits<double>::infinity();
    s += weight * std::log(4.0 * pi * pi * f) + I[j] / f;
  }
  return s / (2.0 * static_cast<double>(M));
}

double lag_product(const Eigen::VectorXd& x, long t, long k) {
  const long T = x.size();
  const long m = k / 2;
  const long a = t + m + (k % 2);
  const long b = t - m;
  if (a < 1 || a > T || b < 1 || b > T) return 0.0;
  return x[a - 1] * x[b - 1];
}

}  // namespace detail

namespace {

void require_theta(const LocalSpectralModel& model, const Eigen::VectorXd& theta) {
  if (theta.size() != model.dim) throw ArgumentError("parameter vector has the wrong dimension");
}

FitResult run_local_fit(const Objective& obj, Eigen::VectorXd start, const OptimizerOptions& opt,
                        const LocalSpectralModel& model, std::string method) {
  FitResult fit;
  fit.method = std::move(method);
  fit.names = model.names;
  fit.initial_objective = obj(start);
  const OptimizerResult r = minimize_bfgs(obj, start, opt);
  fit.eta = r.x;
  fit.objective = r.value;
  fit.iterations = r.iterations;
  fit.converged = r.converged;
  if (model.ar_order >= 0) fit.sigma2 = r.x[model.ar_order];
  return fit;
}

//! Q(k) = (1/T) sum_t (1/b) K((u0 - t/T)/b) P_t(k) and the total weight.
struct KernelLagSums {
  Eigen::VectorXd Q;
  double W = 0.0;
};

KernelLagSums kernel_lag_sums(const Realization& data, double u0, double b, const Kernel& kernel,
                              long max_lag) {
  if (!(b > 0.0 && b <= 1.0)) throw ArgumentError("bandwidth must lie in (0,1]");
  const long T = data.T();
  const double Td = static_cast<double>(T);
  if (b * Td < 2.0) throw WindowError("degenerate kernel window: b*T < 2");
  KernelLagSums s;
  s.Q = Eigen::VectorXd::Zero(max_lag + 1);
  const long lo = std::max(1L, static_cast<long>(std::floor(Td * (u0 - 0.5 * b))));
  const long hi = std::min(T, static_cast<long>(std::ceil(Td * (u0 + 0.5 * b))));
  for (long t = lo; t <= hi; ++t) {
    const double w = kernel((u0 - static_cast<double>(t) / Td) / b) / (b * Td);
    if (w == 0.0) continue;
    s.W += w;
    for (long k = 0; k <= max_lag; ++k) s.Q[k] += w * detail::lag_product(data.values, t, k);
  }
  if (!(s.W > 0.0)) throw WindowError("empty kernel window");
  return s;
}

}  // namespace

double local_whittle_likelihood(const Realization& data, double u0, const Eigen::VectorXd& theta,
                                const LocalSpectralModel& model, long N, const Taper& taper) {
  require_theta(model, theta);
  const SegmentPeriodogram I = segment_periodogram(data, u0, N, taper);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * N)));
  return detail::whittle_grid_sum(I.on_fourier_grid(M), 1.0, model, theta);
}

FitResult local_whittle_fit(const Realization& data, double u0, const LocalSpectralModel& model,
                            long N, const Taper& taper, const LocalFitOptions& options) {
  const SegmentPeriodogram I = segment_periodogram(data, u0, N, taper);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * N)));
  const Eigen::VectorXd Igrid = I.on_fourier_grid(M);
  Eigen::VectorXd start;
  if (options.start) {
    start = *options.start;
  } else if (model.ar_order == 0) {
    start = tapered_local_covariance(data, u0, 0, N, taper).value;
  } else if (model.ar_order > 0) {
    const LocalEstimate yw = local_yule_walker(data, u0, model.ar_order, TaperWindow{N, taper});
    start.resize(model.dim);
    start.head(model.ar_order) = yw.value;
    start[model.ar_order] = *yw.sigma2;
  } else {
    throw ArgumentError("a start value is required for non-AR families");
  }
  require_theta(model, start);
  // Non-causal AR parameters with a root flipped inside the unit circle give the same
  // spectral shape, so the search is confined to the causal region.
  auto obj = [&](const Eigen::VectorXd& th) {
    if (model.ar_order > 0 && !(ar_root_margin(th.head(model.ar_order)) > 0.0))
      return std::numeric_limits<double>::infinity();
    return detail::whittle_grid_sum(Igrid, 1.0, model, th);
  };
  FitResult fit = run_local_fit(obj, start, options.optimizer, model, "local-whittle");
  return fit;
}

double local_generalized_whittle_likelihood(const Realization& data, double u0,
                                            const Eigen::VectorXd& theta,
                                            const LocalSpectralModel& model, double b,
                                            const Kernel& kernel) {
  require_theta(model, theta);
  if (model.ar_order >= 0) {
    const int p = model.ar_order;
    const KernelLagSums s = kernel_lag_sums(data, u0, b, kernel, p);
    const Eigen::VectorXd alpha = theta.head(p);
    const double s2 = theta[p];
    Eigen::VectorXd a(p + 1);
    a[0] = 1.0;
    a.tail(p) = alpha;
    double q = 0.0;
    for (int k = 0; k <= p; ++k)
      q += (k == 0 ? 1.0 : 2.0) * s.Q[k] * a.head(p + 1 - k).dot(a.tail(p + 1 - k));
    return s.W * detail::ar_log_term(alpha, s2) + q / (2.0 * s2);
  }
  const long T = data.T();
  const KernelLagSums s = kernel_lag_sums(data, u0, b, kernel, T - 1);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * T)));
  std::vector<double> q(static_cast<size_t>(M), 0.0);
  q[0] = s.Q[0];
  for (long k = 1; k < T; ++k) {
    q[static_cast<size_t>(k)] = s.Q[k];
    q[static_cast<size_t>(M - k)] = s.Q[k];
  }
  const std::vector<double> c = cosine_sums(q);
  Eigen::VectorXd Jbar(M);
  for (long j = 0; j < M; ++j)
    Jbar[j] = c[static_cast<size_t>(j <= M / 2 ? j : M - j)] / (2.0 * pi);
  return detail::whittle_grid_sum(Jbar, s.W, model, theta);
}

FitResult local_generalized_whittle_fit(const Realization& data, double u0,
                                        const LocalSpectralModel& model, double b,
                                        const Kernel& kernel, const LocalFitOptions& options) {
  if (model.ar_order < 0 && !options.start)
    throw ArgumentError("a start value is required for non-AR families");
  Eigen::VectorXd start;
  if (options.start) {
    start = *options.start;
  } else {
    const int p = model.ar_order;
    const KernelLagSums s = kernel_lag_sums(data, u0, b, kernel, p);
    Eigen::MatrixXd R;
    Eigen::VectorXd r;
    toeplitz_system(s.Q / s.W, p, R, r);
    start.resize(p + 1);
    start.head(p) = p > 0 ? Eigen::VectorXd(-solve_spd(R, r)) : Eigen::VectorXd();
    start[p] = s.Q[0] / s.W + start.head(p).dot(r);
  }
  require_theta(model, start);
  auto obj = [&](const Eigen::VectorXd& th) {
    return local_generalized_whittle_likelihood(data, u0, th, model, b, kernel);
  };
  return run_local_fit(obj, start, options.optimizer, model, "local-gw");
}

FitResult local_conditional_fit(const Realization& data, double u0, double b, const Kernel& kernel,
                                ConditionalFamily family, int p, int d) {
  if (p < 0 || d < 0) throw ArgumentError("order and degree must be nonnegative");
  if (!(u0 >= 0.0 && u0 <= 1.0)) throw ArgumentError("u0 must lie in [0,1]");
  if (!(b > 0.0 && b <= 1.0)) throw ArgumentError("bandwidth must lie in (0,1]");
  const long T = data.T();
  const double Td = static_cast<double>(T);
  if (b * Td < 4.0 * (d + 1)) throw WindowError("kernel window too small: b*T < 4(d+1)");

  std::vector<long> times;
  std::vector<double> w;
  const long lo = std::max<long>(p + 1, static_cast<long>(std::floor(Td * (u0 - 0.5 * b))));
  const long hi = std::min(T, static_cast<long>(std::ceil(Td * (u0 + 0.5 * b))));
  for (long t = lo; t <= hi; ++t) {
    const double wt = kernel((u0 - static_cast<double>(t) / Td) / b) / (b * Td);
    if (wt > 0.0) {
      times.push_back(t);
      w.push_back(wt);
    }
  }
  if (times.empty()) throw WindowError("empty kernel window");
  const long n = static_cast<long>(times.size());
  double W = 0.0;
  for (double x : w) W += x;

  FitResult fit;
  fit.iterations = 0;
  fit.converged = true;

  if (family == ConditionalFamily::tvAR) {
    fit.method = "local-conditional-tvar";
    const int q = p * (d + 1);
    Eigen::MatrixXd Z(n, q);
    Eigen::VectorXd y(n);
    Eigen::VectorXd wv(n);
    for (long i = 0; i < n; ++i) {
      const long t = times[static_cast<size_t>(i)];
      const double du = static_cast<double>(t) / Td - u0;
      double pw = 1.0;
      for (int m = 0; m <= d; ++m, pw *= du)
        for (int j = 1; j <= p; ++j) Z(i, m * p + j - 1) = pw * data.at(t - j);
      y[i] = data.at(t);
      wv[i] = w[static_cast<size_t>(i)];
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(q);
    if (q > 0) {
      const Eigen::MatrixXd G = Z.transpose() * wv.asDiagonal() * Z;
      const Eigen::VectorXd g = Z.transpose() * wv.asDiagonal() * y;
      c = -solve_spd(G, g);
    }
    const Eigen::VectorXd e = y + Z * c;
    const double s2 = (wv.array() * e.array().square()).sum() / W;
    if (!(s2 > 0.0)) throw DomainError("zero residual variance");
    fit.eta.resize(p + 1);
    fit.eta.head(p) = c.head(p);
    fit.eta[p] = s2;
    fit.sigma2 = s2;
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(d + 1, p + 1);
    for (int m = 0; m <= d; ++m)
      for (int j = 0; j < p; ++j) coeffs(m, j) = c[m * p + j];
    coeffs(0, p) = s2;
    fit.local_coefficients = coeffs;
    fit.objective = W * 0.5 * std::log(2.0 * pi * s2) + 0.5 * W;
    fit.initial_objective = fit.objective;
    for (int j = 1; j <= p; ++j) fit.names.push_back("alpha_" + std::to_string(j));
    fit.names.push_back("sigma2");
    return fit;
  }

  fit.method = "local-conditional-tvarch";
  for (int j = 0; j <= p; ++j) fit.names.push_back("alpha_" + std::to_string(j));
  Eigen::MatrixXd Z(n, p + 1);
  Eigen::VectorXd x2(n), du(n);
  for (long i = 0; i < n; ++i) {
    const long t = times[static_cast<size_t>(i)];
    Z(i, 0) = 1.0;
    for (int j = 1; j <= p; ++j) Z(i, j) = data.at(t - j) * data.at(t - j);
    x2[i] = data.at(t) * data.at(t);
    du[i] = static_cast<double>(t) / Td - u0;
  }
  double m2 = 0.0;
  for (long i = 0; i < n; ++i) m2 += w[static_cast<size_t>(i)] * x2[i];
  m2 /= W;
  if (!(m2 > 0.0)) throw DomainError("zero data in the kernel window");

  auto objective = [&](const Eigen::VectorXd& c) {
    double s = 0.0;
    for (long i = 0; i < n; ++i) {
      double wt = 0.0, pw = 1.0;
      for (int m = 0; m <= d; ++m, pw *= du[i])
        wt += pw * Z.row(i).dot(c.segment(m * (p + 1), p + 1));
      if (!(wt > 0.0)) return std::numeric_limits<double>::infinity();
      s += w[static_cast<size_t>(i)] * (0.5 * std::log(wt) + x2[i] / (2.0 * wt));
    }
    return s;
  };

  Eigen::VectorXd c = Eigen::VectorXd::Zero((d + 1) * (p + 1));
  if (p == 0 && d == 0) {
    c[0] = m2;
    fit.objective = objective(c);
    fit.initial_objective = fit.objective;
  } else {
    // Start from a strictly positive conditional variance with small ARCH terms.
    const double share = p > 0 ? 0.1 : 0.0;
    c[0] = m2 * (1.0 - share * p / (1.0 + share * p));
    for (int j = 1; j <= p; ++j) c[j] = share / (1.0 + share * p);
    fit.initial_objective = objective(c);
    const OptimizerResult r = minimize_bfgs(objective, c, OptimizerOptions{1000, 1e-8, 1e-12, 1e-6});
    c = r.x;
    fit.objective = r.value;
    fit.iterations = r.iterations;
    fit.converged = r.converged;
  }
  fit.eta = c.head(p + 1);
  Eigen::MatrixXd coeffs(d + 1, p + 1);
  for (int m = 0; m <= d; ++m) coeffs.row(m) = c.segment(m * (p + 1), p + 1).transpose();
  fit.local_coefficients = coeffs;
  return fit;
}

}  // namespace lsts
