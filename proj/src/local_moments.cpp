#include "lsts/local_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

constexpr double kDerivStep = 1e-3;

void require_u0(double u0) {
  if (!(u0 >= 0.0 && u0 <= 1.0)) throw ArgumentError("u0 must lie in [0,1]");
}

void set_kernel_window(LocalEstimate& e, double u0, double b) {
  e.u0 = u0;
  e.bandwidth = b;
  e.window_lo = std::max(0.0, u0 - 0.5 * b);
  e.window_hi = std::min(1.0, u0 + 0.5 * b);
  e.edge = u0 - 0.5 * b < 0.0 || u0 + 0.5 * b > 1.0;
}

void require_kernel_window(double b, long T) {
  if (!(b > 0.0 && b <= 1.0)) throw ArgumentError("bandwidth must lie in (0,1]");
  if (b * static_cast<double>(T) < 2.0)
    throw WindowError("degenerate kernel window: b*T < 2");
}

}  // namespace

TaperedSegment taper_segment(const Realization& data, double u0, long N, const Taper& taper) {
  require_u0(u0);
  const long centre = static_cast<long>(std::floor(u0 * static_cast<double>(data.T())));
  return taper_segment_from(data, centre - N / 2 + 1, N, taper);
}

TaperedSegment taper_segment_from(const Realization& data, long first_time, long N,
                                  const Taper& taper) {
  const long T = data.T();
  if (N < 1 || N > T) throw ArgumentError("segment length must satisfy 1 <= N <= T");
  TaperedSegment seg;
  seg.first_time = first_time;
  seg.weighted.assign(static_cast<size_t>(N), 0.0);
  seg.retained_lo = std::numeric_limits<long>::max();
  seg.retained_hi = std::numeric_limits<long>::min();
  for (long s = 1; s <= N; ++s) {
    const long t = seg.first_time + s - 1;
    if (t < 1 || t > T) {
      seg.clipped = true;
      continue;
    }
    const double h = taper(static_cast<double>(s) / static_cast<double>(N));
    seg.weighted[static_cast<size_t>(s - 1)] = h * data.at(t);
    seg.H += h * h;
    seg.retained_lo = std::min(seg.retained_lo, t);
    seg.retained_hi = std::max(seg.retained_hi, t);
  }
  if (seg.retained_lo > seg.retained_hi || !(seg.H > 0.0))
    throw WindowError("empty effective segment");
  return seg;
}

Eigen::VectorXd tapered_autocovariances(const TaperedSegment& seg, long max_lag) {
  const long N = static_cast<long>(seg.weighted.size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(max_lag + 1);
  for (long k = 0; k <= max_lag && k < N; ++k) {
    double s = 0.0;
    for (long i = 0; i + k < N; ++i)
      s += seg.weighted[static_cast<size_t>(i + k)] * seg.weighted[static_cast<size_t>(i)];
    c[k] = s / seg.H;
  }
  return c;
}

LocalEstimate tapered_local_covariance(const Realization& data, double u0, long k, long N,
                                       const Taper& taper) {
  if (std::abs(k) >= N) throw ArgumentError("|k| must be smaller than N");
  const TaperedSegment seg = taper_segment(data, u0, N, taper);
  LocalEstimate e;
  e.value = Eigen::VectorXd::Constant(1, tapered_autocovariances(seg, std::abs(k))[std::abs(k)]);
  const double T = static_cast<double>(data.T());
  e.u0 = u0;
  e.bandwidth = static_cast<double>(N) / T;
  e.window_lo = static_cast<double>(seg.retained_lo) / T;
  e.window_hi = static_cast<double>(seg.retained_hi) / T;
  e.edge = seg.clipped;
  e.estimator = "tapered-covariance";
  return e;
}

LocalEstimate kernel_local_covariance(const Realization& data, double u0, long k, double b,
                                      const Kernel& kernel) {
  require_u0(u0);
  const long T = data.T();
  require_kernel_window(b, T);
  k = std::abs(k);
  const double Td = static_cast<double>(T);
  const double half_k = 0.5 * static_cast<double>(k);
  const long lo = std::max<long>(1, static_cast<long>(std::floor(Td * (u0 - 0.5 * b) - half_k)));
  const long hi = std::min<long>(T - k, static_cast<long>(std::ceil(Td * (u0 + 0.5 * b) - half_k)));
  double s = 0.0;
  for (long t = lo; t <= hi; ++t)
    s += kernel((u0 - (static_cast<double>(t) + half_k) / Td) / b) * data.at(t) * data.at(t + k);
  LocalEstimate e;
  e.value = Eigen::VectorXd::Constant(1, s / (b * Td));
  set_kernel_window(e, u0, b);
  e.estimator = "kernel-covariance";
  return e;
}

LocalEstimate kernel_local_covariance(const Realization& data, double u0, LaggedPair ij, double b,
                                      const Kernel& kernel) {
  require_u0(u0);
  const long T = data.T();
  require_kernel_window(b, T);
  const double Td = static_cast<double>(T);
  const long lo = std::max<long>(
      {1 + ij.i, 1 + ij.j, static_cast<long>(std::floor(Td * (u0 - 0.5 * b)))});
  const long hi = std::min<long>(
      {T + ij.i, T + ij.j, static_cast<long>(std::ceil(Td * (u0 + 0.5 * b)))});
  double s = 0.0;
  for (long t = lo; t <= hi; ++t)
    s += kernel((u0 - static_cast<double>(t) / Td) / b) * data.at(t - ij.i) * data.at(t - ij.j);
  LocalEstimate e;
  e.value = Eigen::VectorXd::Constant(1, s / (b * Td));
  set_kernel_window(e, u0, b);
  e.estimator = "kernel-lagged-covariance";
  return e;
}

void toeplitz_system(const Eigen::VectorXd& c, int p, Eigen::MatrixXd& R, Eigen::VectorXd& r) {
  R.resize(p, p);
  r.resize(p);
  for (int i = 0; i < p; ++i) {
    r[i] = c[i + 1];
    for (int j = 0; j < p; ++j) R(i, j) = c[std::abs(i - j)];
  }
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& R, const Eigen::VectorXd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmax > 0.0) || !(cond < 1e12))
    throw RankError("singular covariance matrix (condition " + std::to_string(cond) + ")", cond);
  return R.ldlt().solve(rhs);
}

LocalEstimate local_yule_walker(const Realization& data, double u0, int p, const Window& window) {
  if (p < 1) throw ArgumentError("Yule-Walker order must be >= 1");
  LocalEstimate e;
  Eigen::MatrixXd R;
  Eigen::VectorXd r;
  double c0 = 0.0;
  if (const auto* w = std::get_if<TaperWindow>(&window)) {
    if (p >= w->N) throw ArgumentError("order must be smaller than the segment length");
    const TaperedSegment seg = taper_segment(data, u0, w->N, w->taper);
    const Eigen::VectorXd c = tapered_autocovariances(seg, p);
    toeplitz_system(c, p, R, r);
    c0 = c[0];
    const double T = static_cast<double>(data.T());
    e.u0 = u0;
    e.bandwidth = static_cast<double>(w->N) / T;
    e.window_lo = static_cast<double>(seg.retained_lo) / T;
    e.window_hi = static_cast<double>(seg.retained_hi) / T;
    e.edge = seg.clipped;
    e.estimator = "yule-walker-tapered";
  } else if (const auto* w = std::get_if<KernelWindow>(&window)) {
    Eigen::VectorXd c(p + 1);
    for (int k = 0; k <= p; ++k) c[k] = kernel_local_covariance(data, u0, k, w->b, w->kernel).value[0];
    toeplitz_system(c, p, R, r);
    c0 = c[0];
    set_kernel_window(e, u0, w->b);
    e.estimator = "yule-walker-kernel";
  } else {
    const auto& lw = std::get<LaggedKernelWindow>(window);
    auto cc = [&](long i, long j) {
      return kernel_local_covariance(data, u0, LaggedPair{i, j}, lw.b, lw.kernel).value[0];
    };
    R.resize(p, p);
    r.resize(p);
    for (int i = 1; i <= p; ++i) {
      r[i - 1] = cc(0, i);
      for (int j = i; j <= p; ++j) R(i - 1, j - 1) = R(j - 1, i - 1) = cc(i, j);
    }
    c0 = cc(0, 0);
    set_kernel_window(e, u0, lw.b);
    e.estimator = "yule-walker-lagged-kernel";
  }
  const Eigen::VectorXd alpha = -solve_spd(R, r);
  e.value = alpha;
  e.sigma2 = c0 + alpha.dot(r);
  e.gram = R;
  return e;
}

MseComponents covariance_mse_components(const TvModelSpec& spec, double u0, long k) {
  k = std::abs(k);
  const double h = kDerivStep;
  const double mu = (tv_covariance(spec, u0 + h, k) - 2.0 * tv_covariance(spec, u0, k) +
                     tv_covariance(spec, u0 - h, k)) /
                    (h * h);
  const long L = 4096 + 2 * k;
  const Eigen::VectorXd c = tv_autocovariances(spec, u0, L, 8192);
  double tau = c[0] * (c[0] + c[2 * k]);
  for (long l = 1; l + 2 * k <= L; ++l) {
    const double plus = c[l] * (c[l] + c[l + 2 * k]);
    const double minus = c[l] * (c[l] + c[std::abs(l - 2 * k)]);
    tau += plus + minus;
    if (l > 2 * k && std::abs(plus) < 1e-12 && std::abs(minus) < 1e-12) break;
  }
  return {mu, tau};
}

BandwidthChoice optimal_bandwidth(double mu, double tau, const Kernel& kernel, long T) {
  if (T < 1) throw ArgumentError("T must be positive");
  if (!(tau > 0.0)) throw ArgumentError("variance factor tau must be positive");
  if (mu == 0.0 || !std::isfinite(mu))
    throw NearStationaryError(
        "curvature mu vanishes: the process is locally stationary to second order, use the "
        "maximal bandwidth");
  const double Td = static_cast<double>(T);
  BandwidthChoice out;
  out.unclipped_b = std::pow(kernel.bandwidth_constant(), 0.2) * std::pow(tau / (mu * mu), 0.2) *
                    std::pow(Td, -0.2);
  out.clipped = out.unclipped_b > 1.0;
  out.b = std::min(out.unclipped_b, 1.0);
  out.scaled_mse =
      1.25 * std::pow(kernel.mse_constant(), 0.8) * std::pow(mu * mu, 0.2) * std::pow(tau, 0.8);
  out.mse = out.scaled_mse * std::pow(Td, -0.8);
  return out;
}

BandwidthChoice optimal_bandwidth_tvarch0(const TvModelSpec& spec, double u0,
                                          const Kernel& kernel, long T) {
  if (spec.family != Family::tvARCH || spec.alpha.empty())
    throw UnsupportedFamilyError("tvARCH(0) bandwidth needs a tvARCH spec");
  const ParameterCurve& a0 = spec.alpha[0];
  const double a = a0(u0);
  double a2;
  const int avail = a0.derivative_order_available();
  if (avail < 0 || avail >= 2) {
    a2 = a0.derivative(u0, 2);
  } else {
    const double h = kDerivStep;
    a2 = (a0(u0 + h) - 2.0 * a + a0(u0 - h)) / (h * h);
  }
  const double kappa4 =
      spec.innovations.law == InnovationSpec::Law::moments ? spec.innovations.kappa4 : 0.0;
  return optimal_bandwidth(a2, (2.0 + kappa4) * a * a, kernel, T);
}

YwAsymptotics yw_asymptotics(const TvModelSpec& spec, double u0, int p, const Kernel& kernel,
                             double b, long T) {
  if (p < 1) throw ArgumentError("order must be >= 1");
  const double h = kDerivStep;
  const Eigen::VectorXd c = tv_autocovariances(spec, u0, p);
  const Eigen::VectorXd cp = tv_autocovariances(spec, u0 + h, p);
  const Eigen::VectorXd cm = tv_autocovariances(spec, u0 - h, p);
  const Eigen::VectorXd c2 = (cp - 2.0 * c + cm) / (h * h);
  YwAsymptotics out;
  Eigen::VectorXd r, r2;
  Eigen::MatrixXd R2;
  toeplitz_system(c, p, out.R, r);
  toeplitz_system(c2, p, R2, r2);
  out.alpha = -solve_spd(out.R, r);
  out.sigma2 = c[0] + out.alpha.dot(r);
  out.mu = solve_spd(out.R, R2 * out.alpha + r2);
  out.bias = -0.5 * b * b * kernel.d() * out.mu;
  const Eigen::MatrixXd Rinv = out.R.inverse();
  out.variance = kernel.v() * out.sigma2 * Rinv / (b * static_cast<double>(T));
  out.tau = out.sigma2 * Rinv.trace();
  return out;
}

SegmentLengthChoice optimal_segment_length_nonrescaled(const Eigen::VectorXd& c_t0,
                                                       const Eigen::VectorXd& c_t1,
                                                       const Eigen::VectorXd& c_t2, int p,
                                                       const Kernel& kernel, double T) {
  if (p < 1) throw ArgumentError("order must be >= 1");
  if (c_t0.size() < p + 1 || c_t1.size() < p + 1 || c_t2.size() < p + 1)
    throw ArgumentError("autocovariances up to lag p are required at each time");
  Eigen::MatrixXd R0, R1, R2;
  Eigen::VectorXd r0, r1, r2;
  toeplitz_system(c_t0, p, R0, r0);
  toeplitz_system(c_t1, p, R1, r1);
  toeplitz_system(c_t2, p, R2, r2);
  const Eigen::VectorXd a = -solve_spd(R0, r0);
  const double sigma2 = c_t0[0] + a.dot(r0);
  const double T2 = T * T;
  SegmentLengthChoice out;
  out.mu = solve_spd(R0, (R0 - 2.0 * R1 + R2) * T2 * a + (r0 - 2.0 * r1 + r2) * T2);
  out.tau = sigma2 * R0.inverse().trace();
  const double mu2 = out.mu.squaredNorm();
  if (!(mu2 > 1e-24 * T2 * T2 * c_t0[0] * c_t0[0]))
    throw NearStationaryError(
        "second differences of the local covariances vanish: use the maximal segment length");
  out.N = std::pow(kernel.bandwidth_constant(), 0.2) * std::pow(out.tau / mu2, 0.2) *
          std::pow(T, 0.8);
  return out;
}

}  // namespace lsts
