#include <cmath>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/quadrature.hpp"

namespace lsts {

using std::numbers::pi;

double kl_divergence_limit(const CurveModel& model, const Eigen::VectorXd& eta,
                           const TvModelSpec& truth, const LimitQuadrature& q) {
  if (eta.size() != model.dim()) throw ArgumentError("parameter vector has the wrong dimension");
  const QuadratureRule qu = gauss_legendre(q.u_nodes, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(q.lambda_nodes);
  double total = 0.0;
  for (size_t i = 0; i < qu.nodes.size(); ++i) {
    const double u = qu.nodes[i];
    double inner = 0.0;
    for (size_t j = 0; j < ql.nodes.size(); ++j) {
      const double lam = ql.nodes[j];
      const double fe = model.spectral_density(eta, u, lam);
      const double f = tv_spectral_density(truth, u, lam);
      if (!(fe > 0.0) || !std::isfinite(fe)) throw DomainError("model spectral density is not positive");
      if (!(f > 0.0)) throw DomainError("true spectral density is not positive");
      inner += ql.weights[j] * (std::log(4.0 * pi * pi * fe) + f / fe);
    }
    const double dm = model.mean(eta, u) - truth.mu(u);
    inner += dm * dm / model.spectral_density(eta, u, 0.0);
    total += qu.weights[i] * inner;
  }
  return total / (4.0 * pi);
}

AsymptoticCovariance asymptotic_covariance(const CurveModel& model, const Eigen::VectorXd& eta0,
                                           const TvModelSpec& truth, const LimitQuadrature& q) {
  const int n = model.dim();
  if (eta0.size() != n) throw ArgumentError("parameter vector has the wrong dimension");
  const QuadratureRule qu = gauss_legendre(q.u_nodes, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(q.lambda_nodes);
  Eigen::VectorXd h1(n), h2(n);
  for (int i = 0; i < n; ++i) {
    h1[i] = 1e-5 * (1.0 + std::abs(eta0[i]));
    h2[i] = 1e-4 * (1.0 + std::abs(eta0[i]));
  }
  auto shifted = [&](int i, double si, int j, double sj, const Eigen::VectorXd& h) {
    Eigen::VectorXd e = eta0;
    if (i >= 0) e[i] += si * h[i];
    if (j >= 0) e[j] += sj * h[j];
    return e;
  };
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd dlog(n);
  Eigen::MatrixXd H(n, n);
  for (size_t a = 0; a < qu.nodes.size(); ++a) {
    const double u = qu.nodes[a];
    for (size_t b = 0; b < ql.nodes.size(); ++b) {
      const double lam = ql.nodes[b];
      const double w = qu.weights[a] * ql.weights[b] / (4.0 * pi);
      const double f = tv_spectral_density(truth, u, lam);
      const double fe = model.spectral_density(eta0, u, lam);
      if (!(fe > 0.0)) throw DomainError("model spectral density is not positive");
      for (int i = 0; i < n; ++i)
        dlog[i] = (std::log(model.spectral_density(shifted(i, 1, -1, 0, h1), u, lam)) -
                   std::log(model.spectral_density(shifted(i, -1, -1, 0, h1), u, lam))) /
                  (2.0 * h1[i]);
      G += w * dlog * dlog.transpose();
      // grad f^{-1} = -grad log f / f
      V += w * (f * f / (fe * fe)) * dlog * dlog.transpose();
      if (std::abs(f - fe) > 1e-12 * fe) {
        auto inv = [&](const Eigen::VectorXd& e) { return 1.0 / model.spectral_density(e, u, lam); };
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            const double v = (inv(shifted(i, 1, j, 1, h2)) - inv(shifted(i, 1, j, -1, h2)) -
                              inv(shifted(i, -1, j, 1, h2)) + inv(shifted(i, -1, j, -1, h2))) /
                             (4.0 * h2[i] * h2[j]);
            H(i, j) = H(j, i) = v;
          }
        G += w * (f - fe) * H;
      }
    }
  }
  if (model.has_mean()) {
    Eigen::VectorXd dm(n);
    for (size_t a = 0; a < qu.nodes.size(); ++a) {
      const double u = qu.nodes[a];
      for (int i = 0; i < n; ++i)
        dm[i] = (model.mean(shifted(i, 1, -1, 0, h1), u) - model.mean(shifted(i, -1, -1, 0, h1), u)) /
                (2.0 * h1[i]);
      const double fe0 = model.spectral_density(eta0, u, 0.0);
      const double f0 = tv_spectral_density(truth, u, 0.0);
      G += qu.weights[a] / (2.0 * pi * fe0) * dm * dm.transpose();
      V += qu.weights[a] * f0 / (2.0 * pi * fe0 * fe0) * dm * dm.transpose();
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double lo = es.eigenvalues().cwiseAbs().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) throw RankError("Gamma is singular", cond);
  AsymptoticCovariance out;
  out.Gamma = G;
  out.V = V;
  const Eigen::MatrixXd Gi = G.inverse();
  out.sandwich = Gi * V * Gi;
  return out;
}

}  // namespace lsts
