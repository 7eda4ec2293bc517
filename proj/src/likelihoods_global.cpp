#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "likelihood_detail.hpp"
#include "lsts/errors.hpp"
#include "lsts/fft.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/local_moments.hpp"

namespace lsts {

using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eta(const CurveModel& model, const Eigen::VectorXd& eta) {
  if (eta.size() != model.dim()) throw ArgumentError("parameter vector has the wrong dimension");
}

Eigen::VectorXd centred(const Realization& data, const CurveModel& model,
                        const Eigen::VectorXd& eta) {
  Eigen::VectorXd x = data.values;
  if (model.has_mean()) {
    const double Td = static_cast<double>(data.T());
    for (Eigen::Index t = 0; t < x.size(); ++t) x[t] -= model.mean(eta, static_cast<double>(t + 1) / Td);
  }
  return x;
}

//! (1/4pi) int {log 4 pi^2 f + I/f} for an AR model from c(0..p) of I.
double ar_whittle_term(const Eigen::VectorXd& c, const Eigen::VectorXd& alpha, double s2) {
  const double lt = detail::ar_log_term(alpha, s2);
  if (!std::isfinite(lt)) return kInf;
  const int p = static_cast<int>(alpha.size());
  Eigen::VectorXd a(p + 1);
  a[0] = 1.0;
  a.tail(p) = alpha;
  double q = 0.0;
  for (int k = 0; k <= p; ++k)
    q += (k == 0 ? 1.0 : 2.0) * c[k] * a.head(p + 1 - k).dot(a.tail(p + 1 - k));
  return lt + q / (2.0 * s2);
}

FitResult finish_fit(const CurveModel& model, const OptimizerResult& r, double initial,
                     std::string method, long T) {
  FitResult fit;
  fit.eta = r.x;
  fit.objective = r.value;
  fit.initial_objective = initial;
  fit.iterations = r.iterations;
  fit.converged = r.converged;
  fit.method = std::move(method);
  fit.names = model.parameter_names();
  double s = 0.0;
  const int n = 101;
  for (int i = 0; i < n; ++i) s += model.sigma2(r.x, static_cast<double>(i) / (n - 1));
  fit.sigma2 = s / n;
  if (*fit.sigma2 > 0.0) fit.aic = aic(*fit.sigma2, model.p(), model.alpha_orders(), T);
  return fit;
}

Objective guarded(std::function<double(const Eigen::VectorXd&)> f) {
  return [f = std::move(f)](const Eigen::VectorXd& x) {
    try {
      const double v = f(x);
      return std::isfinite(v) ? v : kInf;
    } catch (const DefinitenessError&) {
      return kInf;
    } catch (const DomainError&) {
      return kInf;
    }
  };
}

struct Segment {
  double u;
  Eigen::VectorXd c;  // tapered autocovariances c(0..p)
};

std::vector<Segment> block_segments(const Eigen::VectorXd& x, long N, long S, int p,
                                    const BlockWhittleOptions& options) {
  Realization r;
  r.values = x;
  const long T = r.T();
  const double Td = static_cast<double>(T);
  std::vector<Segment> segs;
  auto add = [&](long first, long len) {
    const TaperedSegment ts = taper_segment_from(r, first, len, options.taper);
    const double centre = static_cast<double>(first - 1) + 0.5 * static_cast<double>(len);
    segs.push_back({centre / Td, tapered_autocovariances(ts, p)});
  };
  if (options.edge_segments && N >= 4) add(1, N / 2);
  for (long s : block_segment_starts(T, N, S)) add(s, N);
  if (options.edge_segments && N >= 4) add(T - N / 2 + 1, N / 2);
  return segs;
}

double block_objective(const std::vector<Segment>& segs, const CurveModel& model,
                       const Eigen::VectorXd& eta) {
  double s = 0.0;
  for (const Segment& g : segs) {
    const double v = ar_whittle_term(g.c, model.alpha(eta, g.u), model.sigma2(eta, g.u));
    if (!std::isfinite(v)) return kInf;
    s += v;
  }
  return s / static_cast<double>(segs.size());
}

//! Normal equations of sum_j Q_j(alpha(u_j)) in the stacked polynomial coefficients.
void block_normal_equations(const std::vector<Segment>& segs, int p, const std::vector<int>& K,
                            Eigen::MatrixXd& G, Eigen::VectorXd& g) {
  int kmax = 0;
  for (int k : K) kmax = std::max(kmax, k);
  // C(lag, n) = sum_j c_j(lag) u_j^n
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p + 1, 2 * kmax + 1);
  for (const Segment& s : segs) {
    double pw = 1.0;
    for (int n = 0; n <= 2 * kmax; ++n, pw *= s.u)
      for (int l = 0; l <= p; ++l) C(l, n) += s.c[l] * pw;
  }
  std::vector<int> off(static_cast<size_t>(p) + 1, 0);
  for (int i = 0; i < p; ++i) off[static_cast<size_t>(i) + 1] = off[static_cast<size_t>(i)] + K[static_cast<size_t>(i)] + 1;
  const int q = off[static_cast<size_t>(p)];
  G.resize(q, q);
  g.resize(q);
  for (int i = 0; i < p; ++i)
    for (int k = 0; k <= K[static_cast<size_t>(i)]; ++k) {
      const int a = off[static_cast<size_t>(i)] + k;
      g[a] = C(i + 1, k);
      for (int l = 0; l < p; ++l)
        for (int m = 0; m <= K[static_cast<size_t>(l)]; ++m)
          G(a, off[static_cast<size_t>(l)] + m) = C(std::abs(i - l), k + m);
    }
}

}  // namespace

double classical_whittle_likelihood(const Realization& data, const CurveModel& model,
                                    const Eigen::VectorXd& eta) {
  require_eta(model, eta);
  if (!model.is_stationary()) throw ArgumentError("classical Whittle needs a time-constant model");
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  const Eigen::VectorXd x = centred(data, model, eta);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * T)));
  std::vector<double> buf(static_cast<size_t>(M), 0.0);
  std::copy(x.data(), x.data() + T, buf.begin());
  const auto z = rfft(buf);
  Eigen::VectorXd I(M);
  for (long k = 0; k < M; ++k)
    I[k] = std::norm(z[static_cast<size_t>(k <= M / 2 ? k : M - k)]) / (2.0 * pi * static_cast<double>(T));
  return detail::whittle_grid_sum(I, 1.0, LocalSpectralModel::tvar(model.p()), model.theta(eta, 0.0));
}

std::vector<long> block_segment_starts(long T, long N, long S) {
  if (N < 1 || S < 1) throw SegmentationError("segment length and shift must be positive");
  if (N > T) throw SegmentationError("segment length exceeds the sample size");
  if (N == T) return {1};
  if ((T - N) % S != 0)
    throw SegmentationError("T = S(M-1) + N has no integer solution M for T=" + std::to_string(T) +
                            ", N=" + std::to_string(N) + ", S=" + std::to_string(S));
  const long M = (T - N) / S + 1;
  std::vector<long> starts(static_cast<size_t>(M));
  for (long j = 0; j < M; ++j) starts[static_cast<size_t>(j)] = S * j + 1;
  return starts;
}

double block_whittle_likelihood(const Realization& data, const CurveModel& model,
                                const Eigen::VectorXd& eta, long N, long S,
                                const BlockWhittleOptions& options) {
  require_eta(model, eta);
  const auto segs = block_segments(centred(data, model, eta), N, S, model.p(), options);
  return block_objective(segs, model, eta);
}

FitResult block_whittle_fit(const Realization& data, const CurveModel& model, long N, long S,
                            const BlockWhittleOptions& options) {
  const long T = data.T();
  const bool closed = !model.has_mean() && (model.fixed_sigma2() || model.sigma2_order() == 0);
  std::optional<FitResult> closed_fit;
  if (closed) {
    const auto segs = block_segments(data.values, N, S, model.p(), options);
    Eigen::VectorXd eta(model.dim());
    Eigen::MatrixXd G;
    Eigen::VectorXd g;
    if (model.p() > 0) {
      block_normal_equations(segs, model.p(), model.alpha_orders(), G, g);
      eta.head(model.alpha_dim()) = -solve_spd(G, g);
    }
    if (!model.fixed_sigma2()) {
      double s2 = 0.0;
      for (const Segment& s : segs) {
        const Eigen::VectorXd a = model.alpha(eta, s.u);
        Eigen::VectorXd full(model.p() + 1);
        full[0] = 1.0;
        full.tail(model.p()) = a;
        for (int k = 0; k <= model.p(); ++k)
          s2 += (k == 0 ? 1.0 : 2.0) * s.c[k] * full.head(model.p() + 1 - k).dot(full.tail(model.p() + 1 - k));
      }
      eta[model.sigma2_offset()] = s2 / static_cast<double>(segs.size());
    }
    const double v = block_objective(segs, model, eta);
    OptimizerResult r{eta, v, 0, std::isfinite(v)};
    closed_fit = finish_fit(model, r, v, "block-whittle", T);
    if (!options.cross_check) return *closed_fit;
  }
  const Eigen::VectorXd start = curve_model_warm_start(data, model);
  const Realization* dp = &data;
  auto obj = guarded([&, dp](const Eigen::VectorXd& eta) {
    if (!model.valid(eta)) return kInf;
    return block_whittle_likelihood(*dp, model, eta, N, S, options);
  });
  const double f0 = obj(start);
  const OptimizerResult r = minimize_bfgs(obj, start, options.optimizer);
  FitResult generic = finish_fit(model, r, f0, "block-whittle", T);
  if (closed_fit) {
    const double diff = (closed_fit->eta - generic.eta).cwiseAbs().maxCoeff();
    if (model.stability_margin(closed_fit->eta) > 0.0 && diff > 1e-6)
      throw DomainError("closed-form and iterative block Whittle fits differ by " +
                        std::to_string(diff));
    return *closed_fit;
  }
  return generic;
}

double generalized_whittle_likelihood(const Realization& data, const CurveModel& model,
                                      const Eigen::VectorXd& eta, GwRoute route) {
  require_eta(model, eta);
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  const double Td = static_cast<double>(T);
  const int p = model.p();
  const Eigen::VectorXd x = centred(data, model, eta);

  if (route == GwRoute::lags) {
    double s = 0.0;
    Eigen::VectorXd c(p + 1);
    for (long t = 1; t <= T; ++t) {
      const double u = static_cast<double>(t) / Td;
      for (int k = 0; k <= p; ++k) c[k] = detail::lag_product(x, t, k);
      const double v = ar_whittle_term(c, model.alpha(eta, u), model.sigma2(eta, u));
      if (!std::isfinite(v)) return kInf;
      s += v;
    }
    return s / Td;
  }

  double logs = 0.0;
  for (long t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t) / Td;
    const double lt = detail::ar_log_term(model.alpha(eta, u), model.sigma2(eta, u));
    if (!std::isfinite(lt)) return kInf;
    logs += lt;
  }
  logs /= Td;

  if (route == GwRoute::grid) {
    const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * T + p)));
    const LocalSpectralModel lm = LocalSpectralModel::tvar(p);
    double s = 0.0;
    std::vector<double> buf(static_cast<size_t>(M));
    for (long t = 1; t <= T; ++t) {
      std::fill(buf.begin(), buf.end(), 0.0);
      buf[0] = detail::lag_product(x, t, 0);
      for (long k = 1; k < T; ++k) {
        const double v = detail::lag_product(x, t, k);
        buf[static_cast<size_t>(k)] = v;
        buf[static_cast<size_t>(M - k)] = v;
      }
      const std::vector<double> cs = cosine_sums(buf);
      const Eigen::VectorXd th = model.theta(eta, static_cast<double>(t) / Td);
      double q = 0.0;
      for (long j = 0; j < M; ++j) {
        const double J = cs[static_cast<size_t>(j <= M / 2 ? j : M - j)] / (2.0 * pi);
        const double f = lm.density(th, 2.0 * pi * static_cast<double>(j) / static_cast<double>(M));
        if (!(f > 0.0)) return kInf;
        q += J / f;
      }
      s += q / (2.0 * static_cast<double>(M));
    }
    return logs + s / Td;
  }

  const Eigen::MatrixXd U = build_u_matrix(
      [&](double u, double lambda) { return 1.0 / model.spectral_density(eta, u, lambda); }, T);
  return logs + x.dot(U * x) / (8.0 * pi * pi * Td);
}

Eigen::VectorXd curve_model_warm_start(const Realization& data, const CurveModel& model) {
  const long T = data.T();
  const double Td = static_cast<double>(T);
  const int p = model.p();
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(model.dim());
  Realization x = data;
  auto poly_ls = [&](const std::vector<double>& u, const std::vector<double>& y, int order) {
    const int n = static_cast<int>(u.size());
    const int ord = std::min(order, n - 1);
    Eigen::MatrixXd X(n, ord + 1);
    Eigen::VectorXd Y(n);
    for (int i = 0; i < n; ++i) {
      double pw = 1.0;
      for (int k = 0; k <= ord; ++k, pw *= u[static_cast<size_t>(i)]) X(i, k) = pw;
      Y[i] = y[static_cast<size_t>(i)];
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(order + 1);
    c.head(ord + 1) = X.colPivHouseholderQr().solve(Y);
    return c;
  };
  if (model.has_mean()) {
    std::vector<double> u(static_cast<size_t>(T)), y(static_cast<size_t>(T));
    for (long t = 0; t < T; ++t) {
      u[static_cast<size_t>(t)] = static_cast<double>(t + 1) / Td;
      y[static_cast<size_t>(t)] = data.values[t];
    }
    eta.segment(model.mean_offset(), model.mean_order() + 1) = poly_ls(u, y, model.mean_order());
    x.values = centred(data, model, eta);
  }
  int maxK = model.sigma2_order();
  for (int k : model.alpha_orders()) maxK = std::max(maxK, k);
  const int L = std::max(6, 2 * (maxK + 1));
  long N = std::max<long>(4L * (p + 1), 2 * T / L);
  N = std::min(N + (N % 2), T);
  std::vector<double> us;
  std::vector<std::vector<double>> th(static_cast<size_t>(p) + 1);
  for (int i = 0; i < L; ++i) {
    const double u = (i + 0.5) / L;
    try {
      const LocalEstimate yw = local_yule_walker(x, u, p, TaperWindow{N, Taper::sine_squared()});
      us.push_back(u);
      for (int j = 0; j < p; ++j) th[static_cast<size_t>(j)].push_back(yw.value[j]);
      th[static_cast<size_t>(p)].push_back(*yw.sigma2);
    } catch (const RankError&) {
    }
  }
  if (us.empty()) {
    if (!model.fixed_sigma2()) eta[model.sigma2_offset()] = std::max(1e-8, x.values.squaredNorm() / Td);
    return eta;
  }
  int off = 0;
  for (int j = 0; j < p; ++j) {
    const int K = model.alpha_orders()[static_cast<size_t>(j)];
    eta.segment(off, K + 1) = poly_ls(us, th[static_cast<size_t>(j)], K);
    off += K + 1;
  }
  // Keep the start inside the stationary region.
  for (int it = 0; it < 60 && p > 0 && model.stability_margin(eta, 51) <= 1e-3; ++it)
    eta.head(model.alpha_dim()) *= 0.9;
  if (!model.fixed_sigma2()) {
    Eigen::VectorXd s = poly_ls(us, th[static_cast<size_t>(p)], model.sigma2_order());
    eta.segment(model.sigma2_offset(), model.sigma2_order() + 1) = s;
    if (!model.valid(eta)) {
      double m = 0.0;
      for (double v : th[static_cast<size_t>(p)]) m += v;
      s.setZero();
      s[0] = std::max(1e-8, m / static_cast<double>(us.size()));
      eta.segment(model.sigma2_offset(), model.sigma2_order() + 1) = s;
    }
  }
  return eta;
}

FitResult generalized_whittle_fit(const Realization& data, const CurveModel& model,
                                  const GlobalFitOptions& options) {
  const Eigen::VectorXd start = options.start ? *options.start : curve_model_warm_start(data, model);
  require_eta(model, start);
  auto obj = guarded([&](const Eigen::VectorXd& eta) {
    if (!model.valid(eta)) return kInf;
    return generalized_whittle_likelihood(data, model, eta, GwRoute::lags);
  });
  const double f0 = obj(start);
  const OptimizerResult r = minimize_bfgs(obj, start, options.optimizer);
  FitResult fit = finish_fit(model, r, f0, "generalized-whittle", data.T());
  if (options.cross_check) {
    const double g = generalized_whittle_likelihood(data, model, fit.eta, GwRoute::grid);
    const double m = generalized_whittle_likelihood(data, model, fit.eta, GwRoute::matrix);
    const double tol = 1e-8 * (1.0 + std::abs(fit.objective));
    if (std::abs(g - fit.objective) > tol || std::abs(m - fit.objective) > tol)
      throw DomainError("generalized Whittle routes disagree at the optimum");
  }
  return fit;
}

Eigen::MatrixXd model_covariance_matrix(const CurveModel& model, const Eigen::VectorXd& eta,
                                        long T, SigmaAssembly assembly) {
  require_eta(model, eta);
  const double Td = static_cast<double>(T);
  const int p = model.p();
  // One-sided MA weights sigma(u) psi_j(u), truncated once below 1e-16 relative size.
  auto ma = [&](double u) {
    const Eigen::VectorXd a = model.alpha(eta, u);
    const double s2 = model.sigma2(eta, u);
    if (!(s2 > 0.0)) throw DomainError("sigma^2 must be positive");
    const double margin = ar_root_margin(a);
    if (!(margin > 0.0)) throw DefinitenessError("AR polynomial is not stable at u=" + std::to_string(u));
    const double rho = 1.0 / (1.0 + margin);
    const long J = rho > 0.0 ? std::min<long>(200000, static_cast<long>(std::ceil(std::log(1e-16) / std::log(rho))) + p + 1)
                             : p + 1;
    std::vector<double> psi(static_cast<size_t>(J) + 1, 0.0);
    for (long j = 0; j <= J; ++j) {
      double v = j == 0 ? 1.0 : 0.0;
      for (int i = 1; i <= std::min<long>(j, p); ++i) v -= a[i - 1] * psi[static_cast<size_t>(j - i)];
      psi[static_cast<size_t>(j)] = v;
    }
    const double s = std::sqrt(s2);
    for (double& v : psi) v *= s;
    return psi;
  };
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(T, T);
  if (assembly == SigmaAssembly::transfer) {
    std::vector<std::vector<double>> A(static_cast<size_t>(T));
    for (long r = 0; r < T; ++r) A[static_cast<size_t>(r)] = ma(static_cast<double>(r + 1) / Td);
    for (long r = 0; r < T; ++r) {
      const auto& ar = A[static_cast<size_t>(r)];
      const long Jr = static_cast<long>(ar.size()) - 1;
      for (long s = 0; s <= r; ++s) {
        const long d = r - s;
        if (d > Jr) continue;
        const auto& as = A[static_cast<size_t>(s)];
        const long jmax = std::min(Jr, d + static_cast<long>(as.size()) - 1);
        double v = 0.0;
        for (long j = d; j <= jmax; ++j) v += ar[static_cast<size_t>(j)] * as[static_cast<size_t>(j - d)];
        S(r, s) = v;
        S(s, r) = v;
      }
    }
    return S;
  }
  // Midpoint autocovariances c(t/T, k) = sum_j a_j a_{j+k}.
  std::vector<Eigen::VectorXd> cov(static_cast<size_t>(T) + 1);
  for (long t = 1; t <= T; ++t) {
    const std::vector<double> a = ma(static_cast<double>(t) / Td);
    const long J = static_cast<long>(a.size()) - 1;
    const long K = std::min(T - 1, J);
    Eigen::VectorXd c(K + 1);
    for (long k = 0; k <= K; ++k) {
      double v = 0.0;
      for (long j = 0; j + k <= J; ++j) v += a[static_cast<size_t>(j)] * a[static_cast<size_t>(j + k)];
      c[k] = v;
    }
    cov[static_cast<size_t>(t)] = std::move(c);
  }
  for (long r = 1; r <= T; ++r)
    for (long s = 1; s <= r; ++s) {
      const auto& c = cov[static_cast<size_t>((r + s) / 2)];
      const long d = r - s;
      const double v = d < c.size() ? c[d] : 0.0;
      S(r - 1, s - 1) = v;
      S(s - 1, r - 1) = v;
    }
  return S;
}

double exact_gaussian_likelihood(const Realization& data, const CurveModel& model,
                                 const Eigen::VectorXd& eta, const ExactOptions& options) {
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  if (T > options.max_T)
    throw ArgumentError("sample size exceeds the exact-likelihood cap of " + std::to_string(options.max_T));
  const Eigen::MatrixXd S = model_covariance_matrix(model, eta, T, options.assembly);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw DefinitenessError("covariance matrix is not positive definite");
  const Eigen::VectorXd x = centred(data, model, eta);
  const Eigen::VectorXd z = llt.matrixL().solve(x);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double Td = static_cast<double>(T);
  return 0.5 * std::log(2.0 * pi) + logdet / (2.0 * Td) + z.squaredNorm() / (2.0 * Td);
}

FitResult exact_mle_fit(const Realization& data, const CurveModel& model,
                        const GlobalFitOptions& options, const ExactOptions& exact) {
  const long T = data.T();
  if (T > exact.max_T)
    throw ArgumentError("sample size exceeds the exact-likelihood cap of " + std::to_string(exact.max_T));
  Eigen::VectorXd start;
  if (options.start) {
    start = *options.start;
  } else {
    start = generalized_whittle_fit(data, model).eta;
  }
  require_eta(model, start);
  const double Td = static_cast<double>(T);
  const bool profile = !model.fixed_sigma2() && model.sigma2_order() == 0;
  if (!profile) {
    auto obj = guarded([&](const Eigen::VectorXd& eta) {
      if (!model.valid(eta)) return kInf;
      return exact_gaussian_likelihood(data, model, eta, exact);
    });
    const double f0 = obj(start);
    const OptimizerResult r = minimize_bfgs(obj, start, options.optimizer);
    return finish_fit(model, r, f0, "exact-mle", T);
  }
  // sigma^2 enters as a scale factor of Sigma: profile it out.
  const int so = model.sigma2_offset();
  auto expand = [&](const Eigen::VectorXd& z, double s2) {
    Eigen::VectorXd eta(model.dim());
    eta.head(so) = z.head(so);
    eta[so] = s2;
    eta.tail(model.dim() - so - 1) = z.tail(z.size() - so);
    return eta;
  };
  auto profiled = [&](const Eigen::VectorXd& z, double* s2hat) {
    const Eigen::VectorXd eta = expand(z, 1.0);
    const Eigen::MatrixXd S = model_covariance_matrix(model, eta, T, exact.assembly);
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw DefinitenessError("covariance matrix is not positive definite");
    const Eigen::VectorXd x = centred(data, model, eta);
    const Eigen::VectorXd w = llt.matrixL().solve(x);
    const double s2 = w.squaredNorm() / Td;
    if (s2hat) *s2hat = s2;
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return 0.5 * std::log(2.0 * pi) + 0.5 * std::log(s2) + logdet / (2.0 * Td) + 0.5;
  };
  Eigen::VectorXd z0(model.dim() - 1);
  z0.head(so) = start.head(so);
  z0.tail(z0.size() - so) = start.tail(model.dim() - so - 1);
  auto obj = guarded([&](const Eigen::VectorXd& z) { return profiled(z, nullptr); });
  const double f0 = obj(z0);
  const OptimizerResult r = minimize_bfgs(obj, z0, options.optimizer);
  double s2 = 0.0;
  const double v = profiled(r.x, &s2);
  OptimizerResult full{expand(r.x, s2), v, r.iterations, r.converged};
  return finish_fit(model, full, f0, "exact-mle", T);
}

double aic(double sigma2, int p, const std::vector<int>& orders, long T) {
  if (!(sigma2 > 0.0)) throw DomainError("AIC needs a positive innovation variance");
  if (T < 1) throw ArgumentError("sample size must be positive");
  int k = p + 1;
  for (int K : orders) k += K;
  return std::log(sigma2) + 2.0 * k / static_cast<double>(T);
}

double aic(const FitResult& fit, const CurveModel& model, long T) {
  if (!fit.sigma2) throw ArgumentError("fit carries no innovation variance");
  return aic(*fit.sigma2, model.p(), model.alpha_orders(), T);
}

ModelScan model_scan(const Realization& data, int p_max, int K_max, long N, long S,
                     const Taper& taper) {
  if (p_max < 1 || K_max < 0) throw ArgumentError("scan needs p_max >= 1 and K_max >= 0");
  BlockWhittleOptions opt;
  opt.taper = taper;
  const auto segs = block_segments(data.values, N, S, p_max, opt);
  const double M = static_cast<double>(segs.size());
  double c00 = 0.0;
  for (const Segment& s : segs) c00 += s.c[0];
  ModelScan scan;
  double best = kInf;
  for (int p = 1; p <= p_max; ++p) {
    std::vector<int> K(static_cast<size_t>(p), 0);
    while (true) {
      ScanEntry e{p, K, std::numeric_limits<double>::quiet_NaN(), kInf};
      Eigen::MatrixXd G;
      Eigen::VectorXd g;
      block_normal_equations(segs, p, K, G, g);
      try {
        const Eigen::VectorXd beta = -solve_spd(G, g);
        e.sigma2 = (c00 + beta.dot(g)) / M;
        if (e.sigma2 > 0.0) e.aic = aic(e.sigma2, p, K, data.T());
      } catch (const RankError&) {
      }
      if (e.aic < best) {
        best = e.aic;
        scan.best = scan.table.size();
      }
      scan.table.push_back(e);
      int i = 0;
      while (i < p && K[static_cast<size_t>(i)] == K_max) K[static_cast<size_t>(i++)] = 0;
      if (i == p) break;
      ++K[static_cast<size_t>(i)];
    }
  }
  if (!std::isfinite(best)) throw RankError("no model in the scan could be fitted", kInf);
  return scan;
}

}  // namespace lsts
