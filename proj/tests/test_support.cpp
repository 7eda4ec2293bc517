#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "lsts/errors.hpp"
#include "lsts/fft.hpp"
#include "lsts/kernels.hpp"
#include "lsts/optimize.hpp"
#include "lsts/parallel.hpp"
#include "lsts/quadrature.hpp"
#include "lsts/random.hpp"

using namespace lsts;
using std::numbers::pi;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      out[k] += x[j] * std::polar(1.0, -2.0 * pi * static_cast<double>(j * k) / n);
  return out;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(Fft, MatchesNaiveDft) {
  for (std::size_t n : {1u, 7u, 30u, 64u}) {
    const std::vector<double> re = random_vector(n, n), im = random_vector(n, n + 100);
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = {re[i], im[i]};
    const auto a = fft(x);
    const auto b = naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-10) << n << " " << k;
  }
}

TEST(Fft, RealTransformAndCosineSums) {
  const std::size_t n = 50;
  const std::vector<double> x = random_vector(n, 3);
  std::vector<std::complex<double>> xc(x.begin(), x.end());
  const auto full = naive_dft(xc);
  const auto half = rfft(x);
  ASSERT_EQ(half.size(), n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) EXPECT_LT(std::abs(half[k] - full[k]), 1e-10);
  const std::vector<double> c = cosine_sums(x);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[j] * std::cos(2.0 * pi * j * k / n);
    EXPECT_NEAR(c[k], s, 1e-10);
  }
}

TEST(Fft, NextPow2) {
  EXPECT_EQ(next_pow2(1), 1u);
  EXPECT_EQ(next_pow2(2), 2u);
  EXPECT_EQ(next_pow2(3), 4u);
  EXPECT_EQ(next_pow2(1024), 1024u);
  EXPECT_EQ(next_pow2(1025), 2048u);
}

TEST(Fft, ThreadSafePlans) {
  const std::vector<double> x = random_vector(96, 9);
  const auto ref = rfft(x);
  std::vector<double> err(64, 0.0);
  parallel_for(64, [&](std::size_t i) {
    const auto y = rfft(x);
    for (std::size_t k = 0; k < y.size(); ++k) err[i] = std::max(err[i], std::abs(y[k] - ref[k]));
  });
  for (double e : err) EXPECT_EQ(e, 0.0);
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  for (int n : {16, 32, 64}) {
    const QuadratureRule q = gauss_legendre(n, -1.0, 2.0);
    const int deg = 2 * n - 1;
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    const double rel = q.integrate([&](double x) { return std::pow(x, deg); }) / exact - 1.0;
    EXPECT_LT(std::abs(rel), 1e-12) << n;
  }
  EXPECT_THROW(gauss_legendre(10, 0.0, 1.0), ArgumentError);
}

TEST(Quadrature, CompositeAndPeriodic) {
  const QuadratureRule c = composite_gauss_legendre(8, 0.0, pi);
  EXPECT_EQ(c.nodes.size(), 128u);
  EXPECT_NEAR(c.integrate([](double x) { return std::sin(x); }), 2.0, 1e-14);
  const QuadratureRule p = periodic_trapezoid(32);
  EXPECT_NEAR(p.integrate([](double x) { return std::cos(5.0 * x) * std::cos(5.0 * x); }), pi,
              1e-13);
  EXPECT_NEAR(p.integrate([](double x) { return std::cos(7.0 * x); }), 0.0, 1e-13);
  EXPECT_NEAR(p.integrate([](double) { return 1.0; }), 2.0 * pi, 1e-13);
}

TEST(Kernels, CanonicalAndRectangularMoments) {
  const Kernel q = Kernel::canonical_quadratic();
  EXPECT_NEAR(q.integral(), 1.0, 1e-10);
  EXPECT_NEAR(q.d(), 0.05, 1e-10);
  EXPECT_NEAR(q.v(), 1.2, 1e-10);
  EXPECT_NEAR(q.mse_constant(), 1.2 * std::sqrt(0.05), 1e-10);
  EXPECT_DOUBLE_EQ(q(0.6), 0.0);
  EXPECT_NEAR(q(0.25), 6.0 * (0.25 - 0.0625), 1e-15);
  const Kernel r = Kernel::rectangular();
  EXPECT_NEAR(r.d(), 1.0 / 12.0, 1e-10);
  EXPECT_NEAR(r.v(), 1.0, 1e-10);
}

TEST(Kernels, CustomAndSampledAreNormalized) {
  const Kernel c = Kernel::custom([](double x) { return std::cos(pi * x); });
  EXPECT_NEAR(c.integral(), 1.0, 1e-10);
  EXPECT_NEAR(c(0.0), pi / 2.0, 1e-8);
  const Kernel s = Kernel::sampled({2.0, 1.0, 0.0});
  EXPECT_NEAR(s.integral(), 1.0, 1e-10);
  // Triangle on [-1/2,1/2] with peak 2.
  EXPECT_NEAR(s(0.0), 2.0, 1e-10);
  EXPECT_NEAR(s(-0.25), 1.0, 1e-10);
  EXPECT_NEAR(s.d(), 1.0 / 24.0, 1e-10);
}

TEST(Kernels, FromName) {
  EXPECT_EQ(Kernel::from_name("rectangular").kind(), Kernel::Kind::rectangular);
  EXPECT_EQ(Kernel::from_name("canonical-quadratic").kind(), Kernel::Kind::canonical_quadratic);
  EXPECT_THROW(Kernel::from_name("gaussian"), ArgumentError);
  EXPECT_EQ(Taper::from_name("sine-squared").kind(), Taper::Kind::sine_squared);
  EXPECT_EQ(Taper::from_name("hann").kind(), Taper::Kind::sine_squared);
  EXPECT_THROW(Taper::from_name("kaiser"), ArgumentError);
}

TEST(Tapers, SymmetryAndInducedKernel) {
  const Taper h = Taper::sine_squared();
  for (double x : {0.1, 0.3, 0.45}) EXPECT_NEAR(h(x), h(1.0 - x), 1e-15);
  const Kernel k = h.induced_kernel();
  EXPECT_NEAR(k.integral(), 1.0, 1e-10);
  // h(x+1/2)^2 / int h^2 = cos^4(pi x) / (3/8).
  EXPECT_NEAR(k(0.2), std::pow(std::cos(0.2 * pi), 4) / 0.375, 1e-10);
  const Kernel q = Kernel::canonical_quadratic();
  const Kernel back = Taper::from_kernel(q).induced_kernel();
  for (double x : {-0.4, 0.0, 0.3}) EXPECT_NEAR(back(x), q(x), 1e-10);
  EXPECT_THROW(Taper::sampled({0.0, 1.0, 0.5}), ArgumentError);
}

TEST(Random, DeriveSeed) {
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 256; ++i) seen.insert(derive_seed(s, i));
  EXPECT_EQ(seen.size(), 1024u);
}

TEST(Random, InnovationMoments) {
  for (double k4 : {-1.0, 0.0, 2.0}) {
    InnovationSpec spec;
    spec.law = InnovationSpec::Law::moments;
    spec.kappa4 = k4;
    InnovationSampler draw(spec);
    std::mt19937_64 rng(derive_seed(17, static_cast<std::uint64_t>(k4 + 5)));
    const int n = 400000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0, m8 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = draw(rng);
      m1 += e / n;
      m2 += e * e / n;
      m4 += std::pow(e, 4) / n;
      m8 += std::pow(e, 8) / n;
    }
    const double se4 = std::sqrt((m8 - m4 * m4) / n);
    EXPECT_NEAR(m1, 0.0, 4.0 / std::sqrt(n)) << k4;
    EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt((m4 - 1.0) / n)) << k4;
    EXPECT_NEAR(m4, 3.0 + k4, 4.0 * se4) << k4;
  }
}

TEST(Random, InnovationStreamIsConsistentAcrossRanges) {
  const InnovationSpec spec;
  const std::vector<double> wide = innovations(spec, 99, -50, 100);
  const std::vector<double> narrow = innovations(spec, 99, -10, 20);
  for (long t = -10; t <= 20; ++t) EXPECT_EQ(narrow[t + 10], wide[t + 50]) << t;
  EXPECT_NE(innovations(spec, 100, 1, 1)[0], wide[51]);
}

TEST(Random, InvalidKappa4) {
  InnovationSpec spec;
  spec.law = InnovationSpec::Law::moments;
  spec.kappa4 = -2.5;
  EXPECT_THROW(InnovationSampler{spec}, ArgumentError);
}

TEST(Parallel, EachIndexOnceAndExceptionsPropagate) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  const unsigned before = max_threads();
  set_max_threads(1);
  EXPECT_EQ(max_threads(), 1u);
  set_max_threads(0);
  EXPECT_GE(max_threads(), 1u);
  set_max_threads(before);
}

TEST(Optimize, Rosenbrock) {
  const Objective f = [](const Eigen::VectorXd& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  OptimizerOptions o;
  o.max_iterations = 2000;
  const OptimizerResult r = minimize_bfgs(f, Eigen::Vector2d(-1.2, 1.0), o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(Optimize, BarrierKeepsIterateFeasible) {
  const Objective f = [](const Eigen::VectorXd& x) {
    if (!(x[0] > 0.0)) return std::numeric_limits<double>::infinity();
    return (x[0] - 0.1) * (x[0] - 0.1) - 0.01 * std::log(x[0]);
  };
  const OptimizerResult r = minimize_bfgs(f, Eigen::VectorXd::Constant(1, 3.0));
  EXPECT_GT(r.x[0], 0.0);
  // Stationary point of (x - 0.1)^2 - 0.01 log x: 2x^2 - 0.2x - 0.01 = 0.
  EXPECT_NEAR(r.x[0], (0.2 + std::sqrt(0.04 + 0.08)) / 4.0, 1e-6);
}

TEST(Optimize, NumericalGradient) {
  const Objective f = [](const Eigen::VectorXd& x) { return std::sin(x[0]) * std::exp(x[1]); };
  const Eigen::Vector2d x(0.3, -0.2);
  const Eigen::VectorXd g = numerical_gradient(f, x, 1e-6);
  EXPECT_NEAR(g[0], std::cos(0.3) * std::exp(-0.2), 1e-8);
  EXPECT_NEAR(g[1], std::sin(0.3) * std::exp(-0.2), 1e-8);
}
