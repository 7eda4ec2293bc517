#include "lsts/spectral_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"

namespace lsts {

using std::numbers::pi;

Eigen::VectorXd u_grid(int n, double lo, double hi) {
  if (n < 1) throw ArgumentError("grid needs at least one node");
  if (n == 1) return Eigen::VectorXd::Constant(1, 0.5 * (lo + hi));
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

Eigen::VectorXd lambda_grid(int n) {
  if (n < 1) throw ArgumentError("grid needs at least one interval");
  return Eigen::VectorXd::LinSpaced(n + 1, 0.0, pi);
}

Eigen::VectorXd fourier_frequencies(long n) {
  Eigen::VectorXd l(n);
  for (long j = 0; j < n; ++j) l[j] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
  return l;
}

double SegmentPeriodogram::operator()(double lambda) const {
  std::complex<double> s = 0.0;
  for (size_t i = 0; i < seg_.weighted.size(); ++i)
    s += seg_.weighted[i] * std::polar(1.0, -lambda * static_cast<double>(i + 1));
  return std::norm(s) / (2.0 * pi * seg_.H);
}

Eigen::VectorXd SegmentPeriodogram::on_fourier_grid(long M) const {
  if (M < N()) throw ArgumentError("Fourier grid must have at least N nodes");
  std::vector<double> x(static_cast<size_t>(M), 0.0);
  std::copy(seg_.weighted.begin(), seg_.weighted.end(), x.begin());
  const auto z = rfft(x);
  Eigen::VectorXd out(M);
  const double scale = 1.0 / (2.0 * pi * seg_.H);
  for (long k = 0; k < M; ++k) {
    const long kk = k <= M / 2 ? k : M - k;
    out[k] = std::norm(z[static_cast<size_t>(kk)]) * scale;
  }
  return out;
}

SegmentPeriodogram segment_periodogram(const Realization& data, double u0, long N,
                                       const Taper& taper) {
  return SegmentPeriodogram(taper_segment(data, u0, N, taper));
}

Eigen::VectorXd periodogram(const Realization& data, const Eigen::VectorXd& lambda) {
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  Eigen::VectorXd out(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    std::complex<double> s = 0.0;
    for (long t = 1; t <= T; ++t) s += data.at(t) * std::polar(1.0, -lambda[j] * static_cast<double>(t));
    out[j] = std::norm(s) / (2.0 * pi * static_cast<double>(T));
  }
  return out;
}

Eigen::VectorXd lag_products(const Realization& data, long t, const TimeTaper& taper) {
  const long T = data.T();
  if (t < 1 || t > T) throw ArgumentError("time index t must lie in 1..T");
  const double Td = static_cast<double>(T);
  auto x = [&](long s) {
    return taper ? taper(static_cast<double>(s) / Td) * data.at(s) : data.at(s);
  };
  // k = 2m: (t+m, t-m); k = 2m+1: (t+m+1, t-m).
  const long kmax = std::min(2 * (t - 1), 2 * (T - t)) + (T - t > t - 1 ? 1 : 0);
  Eigen::VectorXd P(kmax + 1);
  for (long k = 0; k <= kmax; ++k) {
    const long a = static_cast<long>(std::floor(static_cast<double>(t) + 0.5 + 0.5 * static_cast<double>(k)));
    const long b = static_cast<long>(std::floor(static_cast<double>(t) + 0.5 - 0.5 * static_cast<double>(k)));
    P[k] = x(a) * x(b);
  }
  return P;
}

Eigen::VectorXd pre_periodogram(const Realization& data, long t, const Eigen::VectorXd& lambda,
                                const TimeTaper& taper) {
  const Eigen::VectorXd P = lag_products(data, t, taper);
  Eigen::VectorXd J(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    double s = P[0];
    for (Eigen::Index k = 1; k < P.size(); ++k) s += 2.0 * P[k] * std::cos(lambda[j] * static_cast<double>(k));
    J[j] = s / (2.0 * pi);
  }
  return J;
}

Eigen::MatrixXd pre_periodogram_grid(const Realization& data, const Eigen::VectorXd& lambda,
                                     const TimeTaper& taper) {
  const long T = data.T();
  const Eigen::Index G = lambda.size();
  Eigen::MatrixXd C(G, T);
  for (long k = 0; k < T; ++k)
    for (Eigen::Index j = 0; j < G; ++j)
      C(j, k) = (k == 0 ? 1.0 : 2.0) * std::cos(lambda[j] * static_cast<double>(k));
  Eigen::MatrixXd J(T, G);
  for (long t = 1; t <= T; ++t) {
    const Eigen::VectorXd P = lag_products(data, t, taper);
    J.row(t - 1) = (C.leftCols(P.size()) * P).transpose() / (2.0 * pi);
  }
  return J;
}

double periodogram_identity_check(const Realization& data, const Eigen::VectorXd& lambda) {
  if (data.T() == 0 || lambda.size() == 0) return 0.0;
  const Eigen::VectorXd avg = pre_periodogram_grid(data, lambda).colwise().mean().transpose();
  return (avg - periodogram(data, lambda)).cwiseAbs().maxCoeff();
}

Realization demeaned(const Realization& data) {
  Realization out = data;
  if (data.T() > 0) out.values.array() -= data.values.mean();
  return out;
}

namespace {

// Riemann sum (2 pi / M) (1/b) sum_m K((lambda - mu_m)/b) v_m over mu_m = 2 pi m / M,
// periodic in m.
double smooth_periodic(const Eigen::VectorXd& v, double lambda, double b, const Kernel& K) {
  const long M = v.size();
  const double step = 2.0 * pi / static_cast<double>(M);
  const long lo = static_cast<long>(std::ceil((lambda - 0.5 * b) / step));
  const long hi = static_cast<long>(std::floor((lambda + 0.5 * b) / step));
  double s = 0.0;
  for (long m = lo; m <= hi; ++m) {
    const long idx = ((m % M) + M) % M;
    s += K((lambda - static_cast<double>(m) * step) / b) * v[idx];
  }
  return s * step / b;
}

void check_bandwidths(double b_t, double b_f) {
  if (!(b_t > 0.0 && b_t <= 1.0)) throw WindowError("time bandwidth must lie in (0,1]");
  if (!(b_f > 0.0 && b_f < pi)) throw WindowError("frequency bandwidth must lie in (0,pi)");
}

}  // namespace

SpectralGrid smoothed_tv_spectrum(const Realization& data, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& lambda, double b_t, double b_f,
                                  const SmoothingOptions& options) {
  check_bandwidths(b_t, b_f);
  const long T = data.T();
  const long N = std::lround(b_t * static_cast<double>(T));
  if (N < 2) throw WindowError("segment length b_t*T must be at least 2");
  const Realization x = options.demean ? demeaned(data) : data;
  const long M = static_cast<long>(
      next_pow2(static_cast<size_t>(std::max<double>(2.0 * N, std::ceil(40.0 * pi / b_f)))));
  SpectralGrid g;
  g.u = u;
  g.lambda = lambda;
  g.values.resize(u.size(), lambda.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const Eigen::VectorXd I = segment_periodogram(x, u[i], N, options.taper).on_fourier_grid(M);
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
      g.values(i, j) = smooth_periodic(I, lambda[j], b_f, options.kernel_f);
  }
  g.b_t = static_cast<double>(N) / static_cast<double>(T);
  g.b_f = b_f;
  g.taper = options.taper.name();
  g.kernel_t = options.taper.induced_kernel().name();
  g.kernel_f = options.kernel_f.name();
  return g;
}

SpectralGrid smoothed_tv_spectrum_kernel(const Realization& data, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& lambda, double b_t, double b_f,
                                         const Kernel& kernel_t, const Kernel& kernel_f,
                                         bool demean) {
  check_bandwidths(b_t, b_f);
  const long T = data.T();
  if (b_t * static_cast<double>(T) < 2.0) throw WindowError("b_t*T must be at least 2");
  const Realization x = demean ? demeaned(data) : data;
  const double Td = static_cast<double>(T);
  std::vector<Eigen::VectorXd> P(static_cast<size_t>(T));
  for (long t = 1; t <= T; ++t) P[static_cast<size_t>(t - 1)] = lag_products(x, t);

  SpectralGrid g;
  g.u = u;
  g.lambda = lambda;
  g.values.resize(u.size(), lambda.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    std::vector<double> fold(static_cast<size_t>(T), 0.0);
    const long lo = std::max<long>(1, static_cast<long>(std::floor(Td * (u[i] - 0.5 * b_t))));
    const long hi = std::min<long>(T, static_cast<long>(std::ceil(Td * (u[i] + 0.5 * b_t))));
    for (long t = lo; t <= hi; ++t) {
      const double w = kernel_t((u[i] - static_cast<double>(t) / Td) / b_t) / (b_t * Td);
      if (w == 0.0) continue;
      const Eigen::VectorXd& Pt = P[static_cast<size_t>(t - 1)];
      fold[0] += w * Pt[0];
      for (Eigen::Index k = 1; k < Pt.size(); ++k) {
        fold[static_cast<size_t>(k % T)] += w * Pt[k];
        fold[static_cast<size_t>((T - k % T) % T)] += w * Pt[k];
      }
    }
    const auto z = rfft(fold);
    Eigen::VectorXd Jbar(T);
    for (long j = 0; j < T; ++j) {
      const long jj = j <= T / 2 ? j : T - j;
      Jbar[j] = z[static_cast<size_t>(jj)].real() / (2.0 * pi);
    }
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
      g.values(i, j) = smooth_periodic(Jbar, lambda[j], b_f, kernel_f);
  }
  g.quantity = "ftilde";
  g.b_t = b_t;
  g.b_f = b_f;
  g.kernel_t = kernel_t.name();
  g.kernel_f = kernel_f.name();
  return g;
}

SpectralBandwidths optimal_spectral_bandwidths(double delta_u, double delta_lambda, long T) {
  if (T < 1) throw ArgumentError("T must be positive");
  const double du = std::abs(delta_u), dl = std::abs(delta_lambda);
  if (!(du > 1e-10))
    throw NearStationaryError("time-direction curvature vanishes: b_t grows without bound");
  if (!(dl > 1e-10))
    throw NearStationaryError("frequency-direction curvature vanishes: b_f grows without bound");
  const double c = std::pow(static_cast<double>(T), -1.0 / 6.0) * std::pow(576.0 * pi, 1.0 / 6.0);
  SpectralBandwidths out;
  out.delta_u = delta_u;
  out.delta_lambda = delta_lambda;
  out.unclipped_b_t = c * std::pow(dl / std::pow(du, 5), 1.0 / 12.0);
  out.unclipped_b_f = c * std::pow(du / std::pow(dl, 5), 1.0 / 12.0);
  out.b_t = std::min(out.unclipped_b_t, 1.0);
  out.b_f = std::min(out.unclipped_b_f, pi * (1.0 - 1e-12));
  out.N_opt = out.b_t * static_cast<double>(T);
  return out;
}

SpectralBandwidths optimal_spectral_bandwidths(const TvModelSpec& spec, double u, double lambda,
                                               long T) {
  const double h = 1e-3;
  const double f = tv_spectral_density(spec, u, lambda);
  const double fuu = (tv_spectral_density(spec, u + h, lambda) - 2.0 * f +
                      tv_spectral_density(spec, u - h, lambda)) /
                     (h * h);
  const double fll = (tv_spectral_density(spec, u, lambda + h) - 2.0 * f +
                      tv_spectral_density(spec, u, lambda - h)) /
                     (h * h);
  return optimal_spectral_bandwidths(fuu / f, fll / f, T);
}

SpectralGrid true_tv_spectrum(const TvModelSpec& spec, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& lambda) {
  SpectralGrid g;
  g.u = u;
  g.lambda = lambda;
  g.quantity = "ftrue";
  g.values.resize(u.size(), lambda.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
      g.values(i, j) = tv_spectral_density(spec, u[i], lambda[j]);
  return g;
}

}  // namespace lsts
