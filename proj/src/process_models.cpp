#include "lsts/process_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"

namespace lsts {

using std::numbers::pi;

std::string to_string(Family f) {
  switch (f) {
    case Family::tvAR:
      return "tvAR";
    case Family::tvARMA:
      return "tvARMA";
    case Family::tvARCH:
      return "tvARCH";
  }
  return "tvAR";
}

Family family_from_string(const std::string& s) {
  if (s == "tvAR") return Family::tvAR;
  if (s == "tvARMA") return Family::tvARMA;
  if (s == "tvARCH") return Family::tvARCH;
  throw ArgumentError("unknown model family '" + s + "'");
}

int TvModelSpec::p() const {
  const int n = static_cast<int>(alpha.size());
  return family == Family::tvARCH ? std::max(n - 1, 0) : n;
}

Eigen::VectorXd TvModelSpec::alpha_at(double u) const {
  Eigen::VectorXd a(static_cast<Eigen::Index>(alpha.size()));
  for (size_t j = 0; j < alpha.size(); ++j) a[static_cast<Eigen::Index>(j)] = alpha[j](u);
  return a;
}

Eigen::VectorXd TvModelSpec::beta_at(double u) const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(beta.size()));
  for (size_t j = 0; j < beta.size(); ++j) b[static_cast<Eigen::Index>(j)] = beta[j](u);
  return b;
}

bool TvModelSpec::has_constant_curves() const {
  auto constant = [](const ParameterCurve& c) { return c.is_constant(); };
  return std::all_of(alpha.begin(), alpha.end(), constant) &&
         std::all_of(beta.begin(), beta.end(), constant) && sigma.is_constant() &&
         mu.is_constant();
}

TvModelSpec make_tvar(std::vector<ParameterCurve> alpha, ParameterCurve sigma) {
  TvModelSpec spec;
  spec.family = Family::tvAR;
  spec.alpha = std::move(alpha);
  spec.sigma = std::move(sigma);
  return spec;
}

TvModelSpec sweeping_peak_tvar2() {
  ParameterCurve::Trig a1;
  a1.amplitude = -1.8;
  a1.phase = 1.5;
  a1.inner_amplitude = -1.0;
  a1.inner_frequency = 4.0 * pi;
  return make_tvar({ParameterCurve::trig(a1), ParameterCurve::constant(0.81)});
}

double ar_root_margin(const Eigen::VectorXd& a) {
  Eigen::Index d = a.size();
  while (d > 0 && a[d - 1] == 0.0) --d;
  if (d == 0) return std::numeric_limits<double>::infinity();
  if (d == 1) return 1.0 / std::abs(a[0]) - 1.0;
  // Inverse roots w = 1/z solve w^d + a_1 w^{d-1} + ... + a_d = 0.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) companion(0, j) = -a[j];
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd w = companion.eigenvalues();
  const double wmax = w.cwiseAbs().maxCoeff();
  if (wmax == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / wmax - 1.0;
}

double stability_margin(const TvModelSpec& spec, int grid_size) {
  if (spec.family == Family::tvARCH)
    throw UnsupportedFamilyError("stability margin is defined for tvAR/tvARMA only");
  if (grid_size < 1) throw ArgumentError("stability grid must have at least one node");
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double u = grid_size == 1 ? 0.5 : static_cast<double>(i) / (grid_size - 1);
    margin = std::min(margin, ar_root_margin(spec.alpha_at(u)));
  }
  return margin;
}

void check_stability(const TvModelSpec& spec, int grid_size, double delta) {
  if (grid_size < 1) throw ArgumentError("stability grid must have at least one node");
  if (spec.has_constant_curves()) grid_size = 1;
  for (int i = 0; i < grid_size; ++i) {
    const double u = grid_size == 1 ? 0.5 : static_cast<double>(i) / (grid_size - 1);
    if (spec.family == Family::tvARCH) {
      if (spec.alpha.empty()) throw ArgumentError("tvARCH needs an alpha_0 curve");
      const Eigen::VectorXd a = spec.alpha_at(u);
      if (!(a[0] > 0.0))
        throw StabilityError("tvARCH alpha_0(u) must be positive at u=" + std::to_string(u), u);
      if ((a.tail(a.size() - 1).array() < 0.0).any())
        throw StabilityError("tvARCH coefficients negative at u=" + std::to_string(u), u);
      if (a.tail(a.size() - 1).sum() >= 1.0)
        throw StabilityError("tvARCH coefficients sum to >= 1 at u=" + std::to_string(u), u);
    } else if (ar_root_margin(spec.alpha_at(u)) <= delta) {
      throw StabilityError("AR polynomial has a root with |z| <= 1+delta at u=" + std::to_string(u),
                           u);
    }
  }
}

double tv_spectral_density(const TvModelSpec& spec, double u, double lambda) {
  if (spec.family == Family::tvARCH)
    throw UnsupportedFamilyError("spectral density is not defined for tvARCH");
  const std::complex<double> A = transfer_function(spec, u, lambda);
  return std::norm(A) / (2.0 * pi);
}

std::complex<double> transfer_function(const TvModelSpec& spec, double u, double lambda) {
  if (spec.family == Family::tvARCH)
    throw UnsupportedFamilyError("transfer function is not defined for tvARCH");
  std::complex<double> ar = 1.0, ma = 1.0;
  for (size_t j = 0; j < spec.alpha.size(); ++j)
    ar += spec.alpha[j](u) * std::polar(1.0, -static_cast<double>(j + 1) * lambda);
  if (spec.family == Family::tvARMA)
    for (size_t k = 0; k < spec.beta.size(); ++k)
      ma += spec.beta[k](u) * std::polar(1.0, -static_cast<double>(k + 1) * lambda);
  return spec.sigma(u) * ma / ar;
}

Eigen::VectorXd tv_autocovariances(const TvModelSpec& spec, double u, long max_lag, int nodes) {
  if (max_lag < 0) throw ArgumentError("max_lag must be nonnegative");
  if (spec.family == Family::tvARCH)
    throw UnsupportedFamilyError("autocovariances are not defined for tvARCH");
  const double margin = ar_root_margin(spec.alpha_at(u));
  if (margin <= 0.0) throw StabilityError("model is not stable at u=" + std::to_string(u), u);

  Eigen::VectorXd c(max_lag + 1);
  if (spec.family == Family::tvAR && spec.alpha.size() == 1) {
    const double phi = -spec.alpha[0](u);
    const double s2 = std::pow(spec.sigma(u), 2);
    double pw = s2 / (1.0 - phi * phi);
    for (long k = 0; k <= max_lag; ++k, pw *= phi) c[k] = pw;
    return c;
  }
  const size_t n = std::max<size_t>(static_cast<size_t>(nodes), next_pow2(2 * (max_lag + 1)));
  std::vector<double> f(n);
  for (size_t j = 0; j < n; ++j)
    f[j] = tv_spectral_density(spec, u, 2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
  const auto sums = cosine_sums(f);
  const double w = 2.0 * pi / static_cast<double>(n);
  for (long k = 0; k <= max_lag; ++k) c[k] = w * sums[static_cast<size_t>(k)];
  return c;
}

double tv_covariance(const TvModelSpec& spec, double u, long k) {
  const long lag = std::abs(k);
  return tv_autocovariances(spec, u, lag)[lag];
}

Eigen::VectorXd ma_coefficients(const TvModelSpec& spec, double u, int J) {
  if (spec.family == Family::tvARCH)
    throw UnsupportedFamilyError("MA representation is not defined for tvARCH");
  if (J < 0) throw ArgumentError("MA truncation must be nonnegative");
  const Eigen::VectorXd a = spec.alpha_at(u);
  const Eigen::VectorXd b = spec.family == Family::tvARMA ? spec.beta_at(u) : Eigen::VectorXd();
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(J + 1);
  for (int j = 0; j <= J; ++j) {
    double v = j == 0 ? 1.0 : (j <= b.size() ? b[j - 1] : 0.0);
    for (int i = 1; i <= std::min<int>(j, static_cast<int>(a.size())); ++i) v -= a[i - 1] * psi[j - i];
    psi[j] = v;
  }
  return spec.sigma(u) * psi;
}

}  // namespace lsts
