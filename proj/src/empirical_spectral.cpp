#include "lsts/empirical_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"
#include "lsts/parallel.hpp"
#include "lsts/quadrature.hpp"
#include "lsts/random.hpp"

namespace lsts {

using std::numbers::pi;

IndexFunction IndexFunction::analytic(std::function<double(double, double)> phi,
                                      bool time_invariant, std::string name) {
  if (!phi) throw ArgumentError("index function must be callable");
  IndexFunction f;
  f.kind_ = Kind::analytic;
  f.phi_ = std::move(phi);
  f.time_invariant_ = time_invariant;
  f.name_ = std::move(name);
  return f;
}

IndexFunction IndexFunction::sampled(Eigen::VectorXd u, Eigen::VectorXd lambda,
                                     Eigen::MatrixXd values) {
  if (u.size() < 1 || lambda.size() < 2 || values.rows() != u.size() ||
      values.cols() != lambda.size())
    throw ArgumentError("sampled index function needs a consistent grid");
  const bool half = lambda.minCoeff() >= 0.0;
  auto locate = [](const Eigen::VectorXd& g, double x, Eigen::Index& i, double& w) {
    if (g.size() == 1 || x <= g[0]) {
      i = 0;
      w = 0.0;
      return;
    }
    if (x >= g[g.size() - 1]) {
      i = g.size() - 2;
      w = 1.0;
      return;
    }
    i = std::upper_bound(g.data(), g.data() + g.size(), x) - g.data() - 1;
    w = (x - g[i]) / (g[i + 1] - g[i]);
  };
  IndexFunction f;
  f.kind_ = Kind::grid_sampled;
  f.name_ = "sampled";
  f.phi_ = [u = std::move(u), lambda = std::move(lambda), v = std::move(values), half,
            locate](double uu, double l) {
    if (half) l = std::abs(l);
    Eigen::Index i, j;
    double wu, wl;
    locate(u, uu, i, wu);
    locate(lambda, l, j, wl);
    const Eigen::Index i1 = std::min<Eigen::Index>(i + 1, u.size() - 1);
    return (1 - wu) * ((1 - wl) * v(i, j) + wl * v(i, j + 1)) +
           wu * ((1 - wl) * v(i1, j) + wl * v(i1, j + 1));
  };
  return f;
}

IndexFunction IndexFunction::cosine(long k) {
  return analytic([k](double, double l) { return std::cos(l * static_cast<double>(k)); }, true,
                  "cos(" + std::to_string(k) + " lambda)");
}

IndexFunction IndexFunction::stationarity_indicator(double u, double lambda) {
  return analytic(
      [u, lambda](double v, double mu) {
        return ((v <= u ? 1.0 : 0.0) - u) * (mu >= 0.0 && mu <= lambda ? 1.0 : 0.0);
      },
      false, "stationarity-indicator");
}

IndexFunction IndexFunction::with_taper(std::function<double(double)> h) const {
  IndexFunction f = *this;
  f.taper_ = std::move(h);
  return f;
}

namespace {

//! c_k = int phi(u, lambda) cos(lambda k) d lambda, k = 0..K, on M periodic nodes.
std::vector<double> cosine_coefficients(const IndexFunction& phi, double u, long M, long K) {
  std::vector<double> v(static_cast<size_t>(M));
  for (long j = 0; j < M; ++j)
    v[static_cast<size_t>(j)] = phi(u, -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(M));
  const std::vector<double> c = cosine_sums(v);
  std::vector<double> out(static_cast<size_t>(K) + 1);
  for (long k = 0; k <= K; ++k)
    out[static_cast<size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * c[static_cast<size_t>(k)] * 2.0 * pi /
                                  static_cast<double>(M);
  return out;
}

Eigen::VectorXd tapered_values(const Realization& data, const IndexFunction& phi) {
  Eigen::VectorXd x = data.values;
  if (phi.has_taper()) {
    const double Td = static_cast<double>(data.T());
    for (Eigen::Index t = 0; t < x.size(); ++t) x[t] *= phi.taper(static_cast<double>(t + 1) / Td);
  }
  return x;
}

double kappa4_of(const TvModelSpec& truth) {
  return truth.innovations.law == InnovationSpec::Law::moments ? truth.innovations.kappa4 : 0.0;
}

}  // namespace

double empirical_spectral_measure(const Realization& data, const IndexFunction& phi) {
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  const Eigen::VectorXd x = tapered_values(data, phi);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * T)));
  const double Td = static_cast<double>(T);
  std::vector<double> c;
  if (phi.time_invariant()) c = cosine_coefficients(phi, 0.5, M, T);
  double total = 0.0;
  for (long t = 1; t <= T; ++t) {
    if (!phi.time_invariant()) c = cosine_coefficients(phi, static_cast<double>(t) / Td, M, T);
    // k = 2m: (t+m, t-m); k = 2m+1: (t+m+1, t-m)
    double s = x[t - 1] * x[t - 1] * c[0];
    for (long k = 1;; ++k) {
      const long m = k / 2;
      const long a = t + m + (k % 2);
      const long b = t - m;
      if (a > T || b < 1) break;
      s += 2.0 * x[a - 1] * x[b - 1] * c[static_cast<size_t>(k)];
    }
    total += s;
  }
  return total / (2.0 * pi * Td);
}

double empirical_spectral_measure_periodogram(const Realization& data, const IndexFunction& phi) {
  if (!phi.time_invariant()) throw ArgumentError("periodogram route needs a time-invariant phi");
  const long T = data.T();
  if (T < 1) throw ArgumentError("empty data");
  const Eigen::VectorXd x = tapered_values(data, phi);
  const long M = static_cast<long>(next_pow2(static_cast<size_t>(2 * T)));
  std::vector<double> buf(static_cast<size_t>(M), 0.0);
  std::copy(x.data(), x.data() + T, buf.begin());
  const auto z = rfft(buf);
  double s = 0.0;
  for (long j = 0; j < M; ++j) {
    const double lam = -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(M);
    s += phi(0.5, lam) * std::norm(z[static_cast<size_t>(std::abs(j - M / 2))]);
  }
  return s / (static_cast<double>(M) * static_cast<double>(T));
}

double theoretical_spectral_measure(const TvModelSpec& truth, const IndexFunction& phi,
                                    const MeasureQuadrature& q) {
  const QuadratureRule qu = gauss_legendre(q.u_nodes, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(q.lambda_nodes);
  return qu.integrate([&](double u) {
    const double h = phi.taper(u);
    return h * h * ql.integrate([&](double l) { return phi(u, l) * tv_spectral_density(truth, u, l); });
  });
}

double limit_covariance(const TvModelSpec& truth, const IndexFunction& phi_j,
                        const IndexFunction& phi_k, const MeasureQuadrature& q) {
  const QuadratureRule qu = gauss_legendre(q.u_nodes, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(q.lambda_nodes);
  const double k4 = kappa4_of(truth);
  return qu.integrate([&](double u) {
    const double h = phi_j.taper(u);
    const double h4 = h * h * h * h;
    double a = 0.0, bj = 0.0, bk = 0.0;
    for (size_t i = 0; i < ql.nodes.size(); ++i) {
      const double l = ql.nodes[i];
      const double f = tv_spectral_density(truth, u, l);
      const double pj = phi_j(u, l);
      a += ql.weights[i] * pj * (phi_k(u, l) + phi_k(u, -l)) * f * f;
      bj += ql.weights[i] * pj * f;
      bk += ql.weights[i] * phi_k(u, l) * f;
    }
    return h4 * (2.0 * pi * a + k4 * bj * bk);
  });
}

double rho2(const IndexFunction& phi, const MeasureQuadrature& q) {
  const QuadratureRule qu = gauss_legendre(q.u_nodes, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(q.lambda_nodes);
  return std::sqrt(qu.integrate([&](double u) {
    const double h = phi.taper(u);
    return h * h * h * h * ql.integrate([&](double l) { return phi(u, l) * phi(u, l); });
  }));
}

double rho2_T(const IndexFunction& phi, long T, int lambda_nodes) {
  if (T < 1) throw ArgumentError("T must be positive");
  const QuadratureRule ql = periodic_trapezoid(lambda_nodes);
  double s = 0.0;
  for (long t = 1; t <= T; ++t) {
    const double u = static_cast<double>(t) / static_cast<double>(T);
    s += ql.integrate([&](double l) { return phi(u, l) * phi(u, l); });
  }
  return std::sqrt(s / static_cast<double>(T));
}

namespace {

// Grid-dependent parts of the statistic, shared across null replications.
class StatisticEngine {
 public:
  StatisticEngine(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, long T)
      : u_(u), lambda_(lambda), T_(T) {
    if (u.size() == 0 || lambda.size() == 0) throw ArgumentError("stationarity grids must be nonempty");
    if (u.minCoeff() < 0.0 || u.maxCoeff() > 1.0 || lambda.minCoeff() < 0.0 || lambda.maxCoeff() > pi)
      throw ArgumentError("grids must lie in [0,1] x [0,pi]");
    if (T < 2) throw ArgumentError("need at least two observations");
    const double Td = static_cast<double>(T);
    for (Eigen::Index i = 0; i < u.size(); ++i)
      stops_.push_back({static_cast<long>(std::floor(u[i] * Td + 1e-9)), i});
    std::sort(stops_.begin(), stops_.end());
    // int_0^lambda J d mu = (1/2pi)[P(0) lambda + 2 sum_k P(k) sin(lambda k)/k]
    S_.resize(T, lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      S_(0, j) = lambda[j];
      for (long k = 1; k < T; ++k)
        S_(k, j) = 2.0 * std::sin(lambda[j] * static_cast<double>(k)) / static_cast<double>(k);
    }
  }

  StationarityStatistic operator()(const Realization& data, bool demean) const {
    const long T = T_;
    if (data.T() != T) throw ArgumentError("sample length does not match the statistic grid");
    Eigen::VectorXd x = data.values;
    if (demean) x.array() -= x.mean();
    const double Td = static_cast<double>(T);

    // Cumulative lag sums Q_m(k) = sum_{t <= m} P_t(k) at m = [u_i T].
    const Eigen::Index nu = u_.size();
    Eigen::MatrixXd Qu = Eigen::MatrixXd::Zero(nu, T);
    Eigen::VectorXd Q = Eigen::VectorXd::Zero(T);
    size_t next = 0;
    while (next < stops_.size() && stops_[next].first <= 0) ++next;
    for (long t = 1; t <= T; ++t) {
      const double* xa = x.data() + t - 1;
      const double* xb = x.data() + t - 1;
      // k = 2m: (t+m, t-m); k = 2m+1: (t+m+1, t-m)
      const long mmax = std::min(T - t, t - 1);
      for (long m = 0; m <= mmax; ++m) Q[2 * m] += xa[m] * xb[-m];
      const long m1 = std::min(T - t - 1, t - 1);
      for (long m = 0; m <= m1; ++m) Q[2 * m + 1] += xa[m + 1] * xb[-m];
      while (next < stops_.size() && stops_[next].first == t) Qu.row(stops_[next++].second) = Q.transpose();
    }
    for (; next < stops_.size(); ++next) Qu.row(stops_[next].second) = Q.transpose();
    for (Eigen::Index i = 0; i < nu; ++i) Qu.row(i) -= u_[i] * Q.transpose();

    StationarityStatistic out;
    out.surface = ((Qu * S_) * (std::sqrt(Td) / (2.0 * pi * Td))).cwiseAbs();
    Eigen::Index im, jm;
    out.value = out.surface.maxCoeff(&im, &jm);
    out.u_at_max = u_[im];
    out.lambda_at_max = lambda_[jm];
    return out;
  }

 private:
  Eigen::VectorXd u_;
  Eigen::VectorXd lambda_;
  long T_;
  std::vector<std::pair<long, Eigen::Index>> stops_;
  Eigen::MatrixXd S_;
};

}  // namespace

StationarityStatistic stationarity_statistic(const Realization& data, const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& lambda, bool demean) {
  return StatisticEngine(u, lambda, data.T())(data, demean);
}

ArFit fit_stationary_ar(const Realization& data, int max_order) {
  const long T = data.T();
  if (T < 2) throw ArgumentError("need at least two observations");
  if (max_order < 0) throw ArgumentError("maximal AR order must be nonnegative");
  const int P = static_cast<int>(std::min<long>(max_order, T - 1));
  Eigen::VectorXd x = data.values;
  x.array() -= x.mean();
  Eigen::VectorXd c(P + 1);
  for (int k = 0; k <= P; ++k) c[k] = x.head(T - k).dot(x.tail(T - k)) / static_cast<double>(T);
  if (!(c[0] > 0.0)) throw DomainError("constant series");
  // Durbin recursion in the phi convention X_t = sum phi_j X_{t-j} + e_t.
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(P);
  double v = c[0];
  ArFit best{0, Eigen::VectorXd(), v, std::log(v) + 2.0 / static_cast<double>(T)};
  for (int p = 1; p <= P; ++p) {
    double acc = c[p];
    for (int j = 1; j < p; ++j) acc -= phi[j - 1] * c[p - j];
    const double kappa = acc / v;
    Eigen::VectorXd next = phi;
    next[p - 1] = kappa;
    for (int j = 1; j < p; ++j) next[j - 1] = phi[j - 1] - kappa * phi[p - j - 1];
    phi = next;
    v *= (1.0 - kappa * kappa);
    if (!(v > 0.0)) break;
    const double a = std::log(v) + 2.0 * (p + 1) / static_cast<double>(T);
    if (a < best.aic) best = {p, -phi.head(p), v, a};
  }
  return best;
}

StationarityReport stationarity_test(const Realization& data, const StationarityTestOptions& o) {
  if (o.replications < 100) throw ArgumentError("calibration needs at least 100 replications");
  if (o.u_points < 1 || o.lambda_points < 1) throw ArgumentError("stationarity grids must be nonempty");
  for (double l : o.levels)
    if (!(l > 0.0 && l < 1.0)) throw ArgumentError("levels must lie in (0,1)");
  Eigen::VectorXd u(o.u_points), lambda(o.lambda_points);
  for (int i = 0; i < o.u_points; ++i) u[i] = static_cast<double>(i + 1) / o.u_points;
  for (int j = 0; j < o.lambda_points; ++j) lambda[j] = pi * (j + 1) / o.lambda_points;
  const long T = data.T();
  const StatisticEngine engine(u, lambda, T);
  const StationarityStatistic stat = engine(data, o.demean);
  const ArFit ar = fit_stationary_ar(data, o.max_ar_order);

  std::vector<ParameterCurve> curves;
  for (int j = 0; j < ar.p; ++j) curves.push_back(ParameterCurve::constant(ar.alpha[j]));
  const TvModelSpec null_model = make_tvar(curves, ParameterCurve::constant(std::sqrt(ar.sigma2)));
  std::vector<double> null(static_cast<size_t>(o.replications));
  SimulationOptions sim;
  sim.stability_delta = 0.0;
  parallel_for(null.size(), [&](std::size_t r) {
    const Realization y = simulate(null_model, T, derive_seed(o.seed, r), sim);
    null[r] = engine(y, o.demean).value;
  });
  std::sort(null.begin(), null.end());

  StationarityReport rep;
  rep.statistic = stat.value;
  rep.u_at_max = stat.u_at_max;
  rep.lambda_at_max = stat.lambda_at_max;
  rep.rho2_at_max = std::sqrt(stat.u_at_max * (1.0 - stat.u_at_max) * stat.lambda_at_max);
  const double R = static_cast<double>(o.replications);
  for (double level : o.levels) {
    const long j = std::clamp<long>(static_cast<long>(std::ceil((1.0 - level) * (R + 1.0))), 1,
                                    o.replications);
    rep.critical_values[level] = null[static_cast<size_t>(j - 1)];
    rep.reject[level] = stat.value > rep.critical_values[level];
  }
  const long exceed = null.end() - std::lower_bound(null.begin(), null.end(), stat.value);
  rep.p_value = (1.0 + static_cast<double>(exceed)) / (R + 1.0);
  rep.calibration = {o.replications, o.seed, ar.p, ar.alpha, ar.sigma2};
  rep.u_points = o.u_points;
  rep.lambda_points = o.lambda_points;
  rep.T = T;
  return rep;
}

}  // namespace lsts
