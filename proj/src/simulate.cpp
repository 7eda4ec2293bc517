#include <cmath>
#include <functional>

#include "lsts/errors.hpp"
#include "lsts/process_models.hpp"

namespace lsts {

namespace {

// Runs the model recursion for t = 1-B .. T with rescaled time u(t) and a zero
// initial state; returns X_1..X_T.
Eigen::VectorXd run_recursion(const TvModelSpec& spec, long T, std::uint64_t seed, int burn_in,
                              const std::function<double(long)>& u_of) {
  const long first = 1 - burn_in;
  const std::vector<double> eps = innovations(spec.innovations, seed, first, T);
  const long n = T - first + 1;
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  std::vector<double> se(static_cast<size_t>(n), 0.0);  // sigma((t)/T) eps_t for tvARMA
  auto idx = [&](long t) { return static_cast<size_t>(t - first); };
  const int p = spec.p();
  const int q = spec.q();

  for (long t = first; t <= T; ++t) {
    const double u = u_of(t);
    const size_t i = idx(t);
    switch (spec.family) {
      case Family::tvAR: {
        double v = spec.sigma(u) * eps[i];
        for (int j = 1; j <= p && t - j >= first; ++j) v -= spec.alpha[j - 1](u) * x[idx(t - j)];
        x[i] = v;
        break;
      }
      case Family::tvARMA: {
        se[i] = spec.sigma(u) * eps[i];
        double v = se[i];
        for (int k = 1; k <= q && t - k >= first; ++k) v += spec.beta[k - 1](u) * se[idx(t - k)];
        for (int j = 1; j <= p && t - j >= first; ++j) v -= spec.alpha[j - 1](u) * x[idx(t - j)];
        x[i] = v;
        break;
      }
      case Family::tvARCH: {
        double s2 = spec.alpha[0](u);
        for (int j = 1; j <= p && t - j >= first; ++j) {
          const double xl = x[idx(t - j)];
          s2 += spec.alpha[static_cast<size_t>(j)](u) * xl * xl;
        }
        x[i] = std::sqrt(s2) * eps[i];
        break;
      }
    }
  }
  Eigen::VectorXd out(T);
  for (long t = 1; t <= T; ++t) out[t - 1] = x[idx(t)] + spec.mu(u_of(t));
  return out;
}

void validate(const TvModelSpec& spec, long T, const SimulationOptions& options) {
  if (T <= 0) throw ArgumentError("sample size T must be positive");
  if (options.burn_in < 0) throw ArgumentError("burn-in must be nonnegative");
  if (spec.family == Family::tvARCH && spec.alpha.empty())
    throw ArgumentError("tvARCH needs an alpha_0 curve");
  if (spec.family != Family::tvARMA && !spec.beta.empty())
    throw ArgumentError("MA curves are only allowed for tvARMA");
  check_stability(spec, options.stability_grid, options.stability_delta);
}

}  // namespace

Realization simulate(const TvModelSpec& spec, long T, std::uint64_t seed,
                     const SimulationOptions& options) {
  validate(spec, T, options);
  const double Td = static_cast<double>(T);
  Realization r;
  r.values = run_recursion(spec, T, seed, options.burn_in,
                           [Td](long t) { return static_cast<double>(t) / Td; });
  r.origin = Realization::Origin::simulated;
  r.seed = seed;
  return r;
}

Realization stationary_approximation(const TvModelSpec& spec, double u0, long T,
                                     std::uint64_t seed, const SimulationOptions& options) {
  if (u0 < 0.0 || u0 > 1.0) throw ArgumentError("u0 must lie in [0,1]");
  validate(spec, T, options);
  Realization r;
  r.values = run_recursion(spec, T, seed, options.burn_in, [u0](long) { return u0; });
  r.origin = Realization::Origin::simulated;
  r.seed = seed;
  return r;
}

DerivativeProcess derivative_process_tvar1(const TvModelSpec& spec, double u0, long T,
                                           std::uint64_t seed, int J) {
  if (spec.family != Family::tvAR || spec.alpha.size() != 1)
    throw ArgumentError("derivative process is implemented for tvAR(1)");
  if (T <= 0) throw ArgumentError("sample size T must be positive");
  if (u0 < 0.0 || u0 > 1.0) throw ArgumentError("u0 must lie in [0,1]");
  const double a = spec.alpha[0](u0);
  const double da = spec.alpha[0].derivative(u0, 1);
  const double s = spec.sigma(u0);
  const double ds = spec.sigma.derivative(u0, 1);
  const double rho = std::abs(a);
  if (rho >= 1.0) throw StabilityError("|alpha_1(u0)| must be < 1", u0);
  if (J <= 0) J = rho == 0.0 ? 1 : static_cast<int>(std::ceil(std::log(1e-10) / std::log(rho)));
  J = std::max(J, 1);

  // psi_j = sigma' (-a)^j + sigma (-1)^j j a^{j-1} a'
  std::vector<double> psi(static_cast<size_t>(J) + 1);
  double pw = 1.0;       // (-a)^j
  double pw_prev = 0.0;  // (-a)^{j-1}
  for (int j = 0; j <= J; ++j) {
    // (-1)^j j a^{j-1} = -j (-a)^{j-1}
    psi[static_cast<size_t>(j)] = ds * pw - s * j * pw_prev * da;
    pw_prev = pw;
    pw *= -a;
  }
  const std::vector<double> eps = innovations(spec.innovations, seed, 1 - J, T);
  Realization r;
  r.values.resize(T);
  for (long t = 1; t <= T; ++t) {
    double v = 0.0;
    for (int j = 0; j <= J; ++j) v += psi[static_cast<size_t>(j)] * eps[static_cast<size_t>(t - j + J - 1)];
    r.values[t - 1] = v;
  }
  r.origin = Realization::Origin::simulated;
  r.seed = seed;

  const double tail = rho == 0.0 ? 0.0
                                 : ((J + 1) * std::pow(rho, J) - J * std::pow(rho, J + 1)) /
                                       ((1.0 - rho) * (1.0 - rho));
  return {std::move(r), J, tail};
}

}  // namespace lsts
