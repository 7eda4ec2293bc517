#include <cmath>
#include <complex>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/quadrature.hpp"

namespace lsts {

using std::numbers::pi;

namespace {

//! Fourier coefficients c(j) = (1/2pi) int A(lambda) e^{i lambda j} d lambda, j mod n,
//! by the n-node trapezoid on 2 pi m / n.
std::vector<std::complex<double>> fourier_coefficients(const TransferFunction& A, double u, int n) {
  std::vector<std::complex<double>> v(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) v[static_cast<size_t>(m)] = std::conj(A(u, 2.0 * pi * m / n));
  auto z = fft(v);
  for (auto& c : z) c = std::conj(c) / static_cast<double>(n);
  return z;
}

}  // namespace

Eigen::MatrixXd build_sigma_matrix(const TransferFunction& A, const TransferFunction& B, long T,
                                   int nodes) {
  if (T < 1) throw ArgumentError("matrix size must be positive");
  const int n = std::max<int>(nodes, static_cast<int>(next_pow2(static_cast<size_t>(2 * T))));
  const double Td = static_cast<double>(T);
  // A_r(lambda) = sum_j a_r(j) e^{-i lambda j} and B_s(-lambda) = sum_l b_s(l) e^{i lambda l}:
  // entry (r,s) = sum_j a_r(j) b_s(j - (r-s)).
  std::vector<std::vector<std::complex<double>>> a(static_cast<size_t>(T)), b(static_cast<size_t>(T));
  std::vector<std::vector<int>> support(static_cast<size_t>(T));
  for (long r = 0; r < T; ++r) {
    const double u = static_cast<double>(r + 1) / Td;
    a[static_cast<size_t>(r)] = fourier_coefficients(A, u, n);
    b[static_cast<size_t>(r)] = fourier_coefficients(B, u, n);
    double mx = 0.0;
    for (const auto& c : a[static_cast<size_t>(r)]) mx = std::max(mx, std::abs(c));
    for (int j = 0; j < n; ++j)
      if (std::abs(a[static_cast<size_t>(r)][static_cast<size_t>(j)]) > 1e-18 * mx)
        support[static_cast<size_t>(r)].push_back(j);
  }
  Eigen::MatrixXd S(T, T);
  for (long r = 0; r < T; ++r)
    for (long s = 0; s < T; ++s) {
      const long d = r - s;
      std::complex<double> v = 0.0;
      const auto& ar = a[static_cast<size_t>(r)];
      const auto& bs = b[static_cast<size_t>(s)];
      for (int j : support[static_cast<size_t>(r)]) {
        long l = (j - d) % n;
        if (l < 0) l += n;
        v += ar[static_cast<size_t>(j)] * bs[static_cast<size_t>(l)];
      }
      S(r, s) = v.real();
    }
  return S;
}

Eigen::MatrixXd build_sigma_matrix(const TvModelSpec& spec, long T) {
  const TransferFunction A = [&spec](double u, double lambda) {
    return transfer_function(spec, u, lambda);
  };
  return build_sigma_matrix(A, A, T);
}

Eigen::MatrixXd build_u_matrix(const IndexSurface& phi, long T, int nodes) {
  if (T < 1) throw ArgumentError("matrix size must be positive");
  const long n = std::max<long>(nodes, static_cast<long>(next_pow2(static_cast<size_t>(2 * T))));
  const double Td = static_cast<double>(T);
  // g_m(d) = int cos(lambda d) phi(m/T, lambda) on nodes -pi + 2 pi j / n.
  Eigen::MatrixXd g(T + 1, T);
  std::vector<double> v(static_cast<size_t>(n));
  for (long m = 1; m <= T; ++m) {
    const double u = static_cast<double>(m) / Td;
    for (long j = 0; j < n; ++j)
      v[static_cast<size_t>(j)] = phi(u, -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
    const std::vector<double> c = cosine_sums(v);
    for (long d = 0; d < T; ++d)
      g(m, d) = (d % 2 == 0 ? 1.0 : -1.0) * c[static_cast<size_t>(d)] * 2.0 * pi / static_cast<double>(n);
  }
  Eigen::MatrixXd U(T, T);
  for (long r = 1; r <= T; ++r)
    for (long s = 1; s <= T; ++s) U(r - 1, s - 1) = g((r + s) / 2, std::abs(r - s));
  return U;
}

double matrix_approximation_gap(const TvModelSpec& spec, long T) {
  const Eigen::MatrixXd S = build_sigma_matrix(spec, T);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw DefinitenessError("Sigma_T is not positive definite");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(T, T));
  const Eigen::MatrixXd U = build_u_matrix(
      [&spec](double u, double lambda) {
        return 1.0 / (2.0 * pi * std::norm(transfer_function(spec, u, lambda)));
      },
      T);
  return (inv - U).squaredNorm() / static_cast<double>(T);
}

double szego_check(const TvModelSpec& spec, long T) {
  const Eigen::MatrixXd S = build_sigma_matrix(spec, T);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw DefinitenessError("Sigma_T is not positive definite");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const QuadratureRule qu = gauss_legendre(64, 0.0, 1.0);
  const QuadratureRule ql = periodic_trapezoid(1024);
  const double integral = qu.integrate([&](double u) {
    return ql.integrate([&](double lambda) {
      return std::log(std::norm(transfer_function(spec, u, lambda)));
    });
  });
  return logdet / static_cast<double>(T) - integral / (2.0 * pi);
}

}  // namespace lsts
