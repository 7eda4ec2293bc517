#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/likelihoods.hpp"

namespace lsts {

namespace {

double poly(const Eigen::VectorXd& eta, int offset, int order, double u) {
  double v = 0.0;
  for (int k = order; k >= 0; --k) v = v * u + eta[offset + k];
  return v;
}

}  // namespace

CurveModel::CurveModel(int p, std::vector<int> alpha_orders, int sigma2_order, int mean_order,
                       std::optional<double> fixed_sigma2)
    : p_(p),
      alpha_orders_(std::move(alpha_orders)),
      sigma2_order_(sigma2_order),
      mean_order_(mean_order),
      fixed_sigma2_(fixed_sigma2) {
  if (p < 0) throw ArgumentError("AR order must be nonnegative");
  if (static_cast<int>(alpha_orders_.size()) != p)
    throw ArgumentError("one polynomial order per AR coefficient is required");
  for (int k : alpha_orders_)
    if (k < 0) throw ArgumentError("polynomial orders must be nonnegative");
  if (sigma2_order_ < 0) throw ArgumentError("sigma^2 order must be nonnegative");
  if (mean_order_ < -1) throw ArgumentError("mean order must be >= -1");
  if (fixed_sigma2_ && !(*fixed_sigma2_ > 0.0)) throw ArgumentError("fixed sigma^2 must be > 0");
}

CurveModel CurveModel::stationary_ar(int p, bool with_mean) {
  return CurveModel(p, std::vector<int>(static_cast<size_t>(p), 0), 0, with_mean ? 0 : -1);
}

bool CurveModel::is_stationary() const {
  for (int k : alpha_orders_)
    if (k != 0) return false;
  return (fixed_sigma2_ || sigma2_order_ == 0) && mean_order_ <= 0;
}

int CurveModel::alpha_dim() const {
  int n = 0;
  for (int k : alpha_orders_) n += k + 1;
  return n;
}

int CurveModel::mean_offset() const {
  return alpha_dim() + (fixed_sigma2_ ? 0 : sigma2_order_ + 1);
}

int CurveModel::dim() const { return mean_offset() + mean_order_ + 1; }

std::vector<std::string> CurveModel::parameter_names() const {
  std::vector<std::string> names;
  for (int j = 0; j < p_; ++j)
    for (int k = 0; k <= alpha_orders_[static_cast<size_t>(j)]; ++k)
      names.push_back("b" + std::to_string(j + 1) + "_" + std::to_string(k));
  if (!fixed_sigma2_)
    for (int k = 0; k <= sigma2_order_; ++k) names.push_back("s_" + std::to_string(k));
  for (int k = 0; k <= mean_order_; ++k) names.push_back("m_" + std::to_string(k));
  return names;
}

Eigen::VectorXd CurveModel::alpha(const Eigen::VectorXd& eta, double u) const {
  Eigen::VectorXd a(p_);
  int off = 0;
  for (int j = 0; j < p_; ++j) {
    const int K = alpha_orders_[static_cast<size_t>(j)];
    a[j] = poly(eta, off, K, u);
    off += K + 1;
  }
  return a;
}

double CurveModel::sigma2(const Eigen::VectorXd& eta, double u) const {
  if (fixed_sigma2_) return *fixed_sigma2_;
  return poly(eta, sigma2_offset(), sigma2_order_, u);
}

double CurveModel::mean(const Eigen::VectorXd& eta, double u) const {
  if (mean_order_ < 0) return 0.0;
  return poly(eta, mean_offset(), mean_order_, u);
}

Eigen::VectorXd CurveModel::theta(const Eigen::VectorXd& eta, double u) const {
  Eigen::VectorXd th(p_ + 1);
  th.head(p_) = alpha(eta, u);
  th[p_] = sigma2(eta, u);
  return th;
}

double CurveModel::spectral_density(const Eigen::VectorXd& eta, double u, double lambda) const {
  const Eigen::VectorXd a = alpha(eta, u);
  std::complex<double> s = 1.0;
  for (int j = 0; j < p_; ++j) s += a[j] * std::polar(1.0, -lambda * (j + 1));
  return sigma2(eta, u) / (2.0 * std::numbers::pi * std::norm(s));
}

Eigen::VectorXd CurveModel::inverse_spectrum_coefficients(const Eigen::VectorXd& eta,
                                                          double u) const {
  Eigen::VectorXd a(p_ + 1);
  a[0] = 1.0;
  a.tail(p_) = alpha(eta, u);
  Eigen::VectorXd g(p_ + 1);
  for (int k = 0; k <= p_; ++k) g[k] = a.head(p_ + 1 - k).dot(a.tail(p_ + 1 - k));
  return g;
}

bool CurveModel::valid(const Eigen::VectorXd& eta, int grid) const {
  if (eta.size() != dim() || !eta.allFinite()) return false;
  for (int i = 0; i < grid; ++i) {
    const double u = grid > 1 ? static_cast<double>(i) / (grid - 1) : 0.0;
    if (!(sigma2(eta, u) > 0.0)) return false;
  }
  return true;
}

double CurveModel::stability_margin(const Eigen::VectorXd& eta, int grid) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double u = grid > 1 ? static_cast<double>(i) / (grid - 1) : 0.0;
    m = std::min(m, ar_root_margin(alpha(eta, u)));
  }
  return m;
}

double CurveModel::identifiability(const Eigen::VectorXd& eta, int u_nodes,
                                   int lambda_nodes) const {
  const int rows = u_nodes * lambda_nodes + (has_mean() ? u_nodes : 0);
  auto features = [&](const Eigen::VectorXd& e) {
    Eigen::VectorXd v(rows);
    int r = 0;
    for (int i = 0; i < u_nodes; ++i) {
      const double u = (i + 0.5) / u_nodes;
      for (int l = 0; l < lambda_nodes; ++l)
        v[r++] = std::log(spectral_density(e, u, std::numbers::pi * (l + 0.5) / lambda_nodes));
      if (has_mean()) v[r++] = mean(e, u);
    }
    return v;
  };
  Eigen::MatrixXd J(rows, dim());
  Eigen::VectorXd e = eta;
  for (int k = 0; k < dim(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(eta[k]));
    e[k] = eta[k] + h;
    const Eigen::VectorXd fp = features(e);
    e[k] = eta[k] - h;
    const Eigen::VectorXd fm = features(e);
    e[k] = eta[k];
    J.col(k) = (fp - fm) / (2.0 * h);
  }
  if (dim() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  return svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(rows));
}

TvModelSpec CurveModel::to_spec(const Eigen::VectorXd& eta) const {
  if (eta.size() != dim()) throw ArgumentError("parameter vector has the wrong dimension");
  TvModelSpec spec;
  spec.family = Family::tvAR;
  int off = 0;
  for (int j = 0; j < p_; ++j) {
    const int K = alpha_orders_[static_cast<size_t>(j)];
    std::vector<double> c(eta.data() + off, eta.data() + off + K + 1);
    spec.alpha.push_back(K == 0 ? ParameterCurve::constant(c[0]) : ParameterCurve::polynomial(c));
    off += K + 1;
  }
  if (fixed_sigma2_ || sigma2_order_ == 0) {
    const double s2 = sigma2(eta, 0.0);
    if (!(s2 > 0.0)) throw DomainError("sigma^2 must be positive");
    spec.sigma = ParameterCurve::constant(std::sqrt(s2));
  } else {
    const int n = 1025;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
      const double s2 = sigma2(eta, static_cast<double>(i) / (n - 1));
      if (!(s2 > 0.0)) throw DomainError("sigma^2 must be positive");
      v[static_cast<size_t>(i)] = std::sqrt(s2);
    }
    spec.sigma = ParameterCurve::sampled(std::move(v));
  }
  if (mean_order_ >= 0) {
    std::vector<double> c(eta.data() + mean_offset(), eta.data() + mean_offset() + mean_order_ + 1);
    spec.mu = mean_order_ == 0 ? ParameterCurve::constant(c[0]) : ParameterCurve::polynomial(c);
  }
  return spec;
}

Eigen::VectorXd CurveModel::eta_from_spec(const TvModelSpec& spec) const {
  if (spec.family != Family::tvAR || spec.p() != p_)
    throw ArgumentError("spec does not match the curve model");
  const int n = 201;
  Eigen::VectorXd eta(dim());
  auto fit = [&](int offset, int order, const std::function<double(double)>& g) {
    Eigen::MatrixXd X(n, order + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(i) / (n - 1);
      double pw = 1.0;
      for (int k = 0; k <= order; ++k, pw *= u) X(i, k) = pw;
      y[i] = g(u);
    }
    eta.segment(offset, order + 1) = X.colPivHouseholderQr().solve(y);
  };
  int off = 0;
  for (int j = 0; j < p_; ++j) {
    const int K = alpha_orders_[static_cast<size_t>(j)];
    fit(off, K, [&](double u) { return spec.alpha[static_cast<size_t>(j)](u); });
    off += K + 1;
  }
  if (!fixed_sigma2_)
    fit(sigma2_offset(), sigma2_order_, [&](double u) {
      const double s = spec.sigma(u);
      return s * s;
    });
  if (mean_order_ >= 0) fit(mean_offset(), mean_order_, [&](double u) { return spec.mu(u); });
  return eta;
}

LocalSpectralModel LocalSpectralModel::tvar(int p) {
  LocalSpectralModel m;
  m.dim = p + 1;
  m.ar_order = p;
  for (int j = 1; j <= p; ++j) m.names.push_back("alpha_" + std::to_string(j));
  m.names.push_back("sigma2");
  m.density = [p](const Eigen::VectorXd& th, double lambda) {
    std::complex<double> s = 1.0;
    for (int j = 0; j < p; ++j) s += th[j] * std::polar(1.0, -lambda * (j + 1));
    return th[p] / (2.0 * std::numbers::pi * std::norm(s));
  };
  return m;
}

LocalSpectralModel LocalSpectralModel::white_noise() {
  LocalSpectralModel m = tvar(0);
  m.names = {"sigma2"};
  return m;
}

}  // namespace lsts
