#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lsts/curve.hpp"
#include "lsts/errors.hpp"
#include "lsts/kernels.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/optimize.hpp"
#include "lsts/parallel.hpp"
#include "lsts/process_models.hpp"
#include "lsts/random.hpp"
#include "lsts/spectral_estimation.hpp"

using namespace lsts;
using std::numbers::pi;

namespace {

Realization series(std::vector<double> v) {
  Realization r;
  r.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return r;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TvModelSpec ar1(double a) { return make_tvar({ParameterCurve::constant(a)}); }

double mean(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / xs.size();
}

double std_error(const std::vector<double>& xs) {
  const double m = mean(xs);
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return std::sqrt(v / (xs.size() - 1) / xs.size());
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

OptimizerOptions tight() {
  OptimizerOptions o;
  o.gradient_tolerance = 1e-10;
  o.step_tolerance = 1e-14;
  o.max_iterations = 2000;
  return o;
}

}  // namespace

// Local likelihoods

TEST(LocalWhittle, EqualsLocalYuleWalkerForAr) {
  const Realization x = simulate(sweeping_peak_tvar2(), 128, 1);
  const Taper h = Taper::sine_squared();
  const FitResult w = local_whittle_fit(x, 0.5, LocalSpectralModel::tvar(2), 64, h);
  const LocalEstimate yw = local_yule_walker(x, 0.5, 2, TaperWindow{64, h});
  EXPECT_NEAR(w.eta[0], yw.value[0], 1e-8);
  EXPECT_NEAR(w.eta[1], yw.value[1], 1e-8);
  EXPECT_NEAR(w.eta[2], *yw.sigma2, 1e-8);
}

TEST(LocalWhittle, WhiteNoiseVarianceIsPeriodogramIntegral) {
  const Realization x = simulate(sweeping_peak_tvar2(), 256, 2);
  const Taper h = Taper::sine_squared();
  const FitResult w = local_whittle_fit(x, 0.3, LocalSpectralModel::white_noise(), 64, h);
  // int I dlambda = c^(u0,0) by Parseval, and sigma^2 of a flat spectrum is its integral.
  const double c0 = tapered_local_covariance(x, 0.3, 0, 64, h).value[0];
  EXPECT_NEAR(w.eta[0], c0, 1e-6 * c0);
}

TEST(LocalWhittle, FittedPeakNearTrueFrequency) {
  const Realization x = simulate(sweeping_peak_tvar2(), 128, 1);
  const LocalSpectralModel m = LocalSpectralModel::tvar(2);
  const FitResult w = local_whittle_fit(x, 0.5, m, 64);
  double best = 0.0, arg = 0.0;
  for (int j = 0; j <= 2000; ++j) {
    const double l = pi * j / 2000.0;
    const double f = m.density(w.eta, l);
    if (f > best) best = f, arg = l;
  }
  EXPECT_NEAR(arg, 1.5 - std::cos(4.0 * pi * 0.5), 0.2);
}

TEST(LocalWhittle, NonPositiveDensityIsRejected) {
  const Realization x = simulate(ar1(-0.5), 128, 3);
  EXPECT_TRUE(std::isinf(
      local_whittle_likelihood(x, 0.5, vec({-1.0}), LocalSpectralModel::white_noise(), 64)));
}

TEST(LocalGeneralizedWhittle, RecoversStationaryAr1) {
  const Realization x = simulate(ar1(-0.5), 4096, 4);
  const FitResult f = local_generalized_whittle_fit(x, 0.5, LocalSpectralModel::tvar(1), 0.3);
  EXPECT_NEAR(f.eta[0], -0.5, 0.1);
  EXPECT_NEAR(f.eta[1], 1.0, 0.15);
}

TEST(LocalConditional, Tvarch0IsWeightedMeanOfSquares) {
  TvModelSpec spec;
  spec.family = Family::tvARCH;
  spec.alpha = {ParameterCurve::polynomial({1.0, 1.0})};
  const Realization x = simulate(spec, 1000, 5);
  const Kernel k = Kernel::canonical_quadratic();
  const double u0 = 0.4, b = 0.2;
  double num = 0.0, den = 0.0;
  for (long t = 1; t <= x.T(); ++t) {
    const double w = k((u0 - t / 1000.0) / b);
    num += w * x.at(t) * x.at(t);
    den += w;
  }
  const FitResult f = local_conditional_fit(x, u0, b, k, ConditionalFamily::tvARCH, 0, 0);
  EXPECT_NEAR(f.eta[0], num / den, 1e-10 * num / den);
}

TEST(LocalConditional, TvarDegreeZeroEqualsLaggedYuleWalker) {
  const Realization x = simulate(sweeping_peak_tvar2(), 1024, 6);
  const Kernel k = Kernel::canonical_quadratic();
  const FitResult f = local_conditional_fit(x, 0.6, 0.2, k, ConditionalFamily::tvAR, 2, 0);
  const LocalEstimate yw = local_yule_walker(x, 0.6, 2, LaggedKernelWindow{0.2, k});
  EXPECT_NEAR(f.eta[0], yw.value[0], 1e-10);
  EXPECT_NEAR(f.eta[1], yw.value[1], 1e-10);
}

TEST(LocalConditional, LocalLinearSlopeMonteCarlo) {
  const TvModelSpec spec = make_tvar({ParameterCurve::polynomial({-0.2, -0.5})});
  const int R = 200;
  std::vector<double> slope(R);
  parallel_for(R, [&](std::size_t r) {
    const Realization x = simulate(spec, 4096, derive_seed(77, r));
    const FitResult f = local_conditional_fit(x, 0.5, 0.3, Kernel::canonical_quadratic(),
                                              ConditionalFamily::tvAR, 1, 1);
    slope[r] = (*f.local_coefficients)(1, 0);
  });
  EXPECT_NEAR(mean(slope), -0.5, 3.0 * std_error(slope));
}

TEST(LocalConditional, Tvarch1NearTruth) {
  TvModelSpec spec;
  spec.family = Family::tvARCH;
  spec.alpha = {ParameterCurve::constant(1.0), ParameterCurve::constant(0.3)};
  const Realization x = simulate(spec, 8192, 8);
  const FitResult f = local_conditional_fit(x, 0.5, 0.5, Kernel::canonical_quadratic(),
                                            ConditionalFamily::tvARCH, 1, 0);
  EXPECT_NEAR(f.eta[0], 1.0, 0.2);
  EXPECT_NEAR(f.eta[1], 0.3, 0.15);
}

TEST(LocalConditional, SingularDesign) {
  const Realization x = series(std::vector<double>(400, 0.0));
  EXPECT_THROW(local_conditional_fit(x, 0.5, 0.3, Kernel::canonical_quadratic(),
                                     ConditionalFamily::tvAR, 2, 1),
               RankError);
}

TEST(LocalConditional, TooFewPointsForDegree) {
  const Realization x = simulate(ar1(-0.5), 40, 1);
  EXPECT_THROW(local_conditional_fit(x, 0.5, 0.1, Kernel::canonical_quadratic(),
                                     ConditionalFamily::tvAR, 1, 1),
               WindowError);
}

// Block Whittle

TEST(BlockWhittle, SegmentStarts) {
  EXPECT_EQ(block_segment_starts(128, 64, 32), (std::vector<long>{1, 33, 65}));
  EXPECT_EQ(block_segment_starts(100, 100, 7), (std::vector<long>{1}));
  EXPECT_THROW(block_segment_starts(100, 16, 5), SegmentationError);
  EXPECT_THROW(block_segment_starts(100, 128, 1), SegmentationError);
}

TEST(BlockWhittle, SingleSegmentIsClassicalWhittle) {
  const Realization x = simulate(ar1(-0.6), 256, 9);
  const CurveModel m = CurveModel::stationary_ar(1);
  BlockWhittleOptions o;
  o.taper = Taper::rectangular();
  const FitResult bw = block_whittle_fit(x, m, 256, 1, o);
  const OptimizerResult cw = minimize_bfgs(
      [&](const Eigen::VectorXd& e) {
        return e[1] > 0.0 ? classical_whittle_likelihood(x, m, e) : INFINITY;
      },
      vec({0.0, 1.0}), tight());
  EXPECT_LT((bw.eta - cw.x).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BlockWhittle, ClosedFormMatchesGenericOptimizer) {
  const Realization x = simulate(sweeping_peak_tvar2(), 256, 10);
  const CurveModel m(2, {2, 0});
  const FitResult closed = block_whittle_fit(x, m, 32, 8);
  const OptimizerResult generic = minimize_bfgs(
      [&](const Eigen::VectorXd& e) {
        return m.valid(e) ? block_whittle_likelihood(x, m, e, 32, 8) : INFINITY;
      },
      curve_model_warm_start(x, m), tight());
  EXPECT_LT((closed.eta - generic.x).cwiseAbs().maxCoeff(), 1e-6);
  BlockWhittleOptions o;
  o.cross_check = true;
  EXPECT_NO_THROW(block_whittle_fit(x, m, 32, 8, o));
}

TEST(BlockWhittle, SweepingPeakConstantCoefficient) {
  const CurveModel m(2, {6, 0});
  std::vector<double> a2(20);
  parallel_for(20, [&](std::size_t s) {
    const Realization x = simulate(sweeping_peak_tvar2(), 128, derive_seed(2024, s));
    a2[s] = block_whittle_fit(x, m, 16, 1).eta[7];
  });
  EXPECT_NEAR(median(a2), 0.81, 0.15);
}

TEST(BlockWhittle, TooFewSegmentsIsRankError) {
  const Realization x = simulate(sweeping_peak_tvar2(), 128, 1);
  EXPECT_THROW(block_whittle_fit(x, CurveModel(2, {6, 0}), 64, 32), RankError);
}

TEST(BlockWhittle, ScaleEquivariance) {
  const Realization x = simulate(sweeping_peak_tvar2(), 256, 11);
  Realization y = x;
  y.values *= 3.0;
  const CurveModel m(2, {3, 1});
  const FitResult fx = block_whittle_fit(x, m, 32, 8);
  const FitResult fy = block_whittle_fit(y, m, 32, 8);
  const int s = m.sigma2_offset();
  EXPECT_LT((fx.eta.head(s) - fy.eta.head(s)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(fy.eta[s], 9.0 * fx.eta[s], 1e-10 * fy.eta[s]);
}

// Generalized Whittle

TEST(GeneralizedWhittle, StationaryModelEqualsClassicalWhittle) {
  const Realization x = simulate(ar1(-0.4), 256, 12);
  const CurveModel m = CurveModel::stationary_ar(2);
  const Eigen::VectorXd eta = vec({-0.3, 0.1, 1.3});
  EXPECT_NEAR(generalized_whittle_likelihood(x, m, eta), classical_whittle_likelihood(x, m, eta),
              1e-10);
}

TEST(GeneralizedWhittle, ThreeRoutesAgree) {
  const CurveModel m(2, {2, 1}, 1);
  const Eigen::VectorXd eta = vec({-0.5, 0.3, -0.2, 0.2, 0.1, 1.0, 0.5});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Realization x = simulate(sweeping_peak_tvar2(), 128, seed);
    const double lags = generalized_whittle_likelihood(x, m, eta, GwRoute::lags);
    EXPECT_NEAR(generalized_whittle_likelihood(x, m, eta, GwRoute::grid), lags, 1e-8);
    EXPECT_NEAR(generalized_whittle_likelihood(x, m, eta, GwRoute::matrix), lags, 1e-8);
  }
}

TEST(GeneralizedWhittle, FitPassesRouteCrossCheck) {
  const CurveModel m(1, {1});
  const Realization x = simulate(m.to_spec(vec({-0.4, -0.4, 1.0})), 256, 13);
  GlobalFitOptions o;
  o.cross_check = true;
  const FitResult f = generalized_whittle_fit(x, m, o);
  EXPECT_TRUE(f.converged);
  EXPECT_LE(f.objective, f.initial_objective);
}

TEST(GeneralizedWhittle, ApproachesExactLikelihood) {
  const CurveModel m(1, {1});
  const Eigen::VectorXd eta = vec({-0.4, -0.4, 1.0});
  const TvModelSpec spec = m.to_spec(eta);
  std::vector<double> d128(20), d512(20);
  for (int s = 0; s < 20; ++s) {
    const Realization a = simulate(spec, 128, derive_seed(31, s));
    const Realization b = simulate(spec, 512, derive_seed(32, s));
    d128[s] = std::abs(generalized_whittle_likelihood(a, m, eta) -
                       exact_gaussian_likelihood(a, m, eta));
    d512[s] = std::abs(generalized_whittle_likelihood(b, m, eta) -
                       exact_gaussian_likelihood(b, m, eta));
  }
  EXPECT_LT(median(d512), median(d128));
}

TEST(GeneralizedWhittle, CloseToExactMle) {
  const CurveModel m(1, {1});
  const TvModelSpec spec = m.to_spec(vec({-0.4, -0.4, 1.0}));
  std::vector<double> diff(6);
  for (int s = 0; s < 6; ++s) {
    const Realization x = simulate(spec, 512, derive_seed(41, s));
    diff[s] = (generalized_whittle_fit(x, m).eta - exact_mle_fit(x, m).eta).cwiseAbs().maxCoeff();
  }
  EXPECT_LE(median(diff), 0.05);
}

// Exact Gaussian likelihood

TEST(ExactLikelihood, StationaryAr1PredictionErrorDecomposition) {
  const Realization x = simulate(ar1(-0.6), 64, 14);
  const CurveModel m = CurveModel::stationary_ar(1);
  const double a = -0.45, s2 = 1.3;
  const double v1 = s2 / (1.0 - a * a);
  double l = std::log(v1) + x.at(1) * x.at(1) / v1;
  for (long t = 2; t <= 64; ++t) {
    const double e = x.at(t) + a * x.at(t - 1);
    l += std::log(s2) + e * e / s2;
  }
  const double ped = 0.5 * std::log(2.0 * pi) + l / (2.0 * 64);
  EXPECT_NEAR(exact_gaussian_likelihood(x, m, vec({a, s2})), ped, 1e-8);
  ExactOptions mid;
  mid.assembly = SigmaAssembly::midpoint;
  EXPECT_NEAR(exact_gaussian_likelihood(x, m, vec({a, s2}), mid), ped, 1e-8);
}

TEST(ExactLikelihood, WhiteNoiseWithMean) {
  const Realization x = series({1.0, 2.5, -0.5, 3.0, 0.75});
  const CurveModel m(0, {}, 0, 0);
  const double s2 = 2.0, mu = 0.8;
  double q = 0.0;
  for (long t = 1; t <= 5; ++t) q += (x.at(t) - mu) * (x.at(t) - mu);
  const double expected = 0.5 * std::log(2.0 * pi) + 0.5 * std::log(s2) + q / (2.0 * 5 * s2);
  EXPECT_NEAR(exact_gaussian_likelihood(x, m, vec({s2, mu})), expected, 1e-12);
}

TEST(ExactLikelihood, Errors) {
  const Realization x = simulate(ar1(-0.5), 64, 1);
  const CurveModel m = CurveModel::stationary_ar(1);
  EXPECT_THROW(exact_gaussian_likelihood(x, m, vec({-0.5, -1.0})), DomainError);
  EXPECT_THROW(exact_gaussian_likelihood(x, m, vec({-1.2, 1.0})), DefinitenessError);
  ExactOptions cap;
  cap.max_T = 32;
  EXPECT_THROW(exact_gaussian_likelihood(x, m, vec({-0.5, 1.0}), cap), ArgumentError);
}

TEST(ExactLikelihood, MleConsistentOverSeeds) {
  const CurveModel m(1, {1});
  const Eigen::VectorXd truth = vec({-0.4, -0.4, 1.0});
  const TvModelSpec spec = m.to_spec(truth);
  const int R = 20;
  std::vector<std::vector<double>> est(truth.size(), std::vector<double>(R));
  for (int s = 0; s < R; ++s) {
    const FitResult f = exact_mle_fit(simulate(spec, 512, derive_seed(51, s)), m);
    for (Eigen::Index i = 0; i < truth.size(); ++i) est[i][s] = f.eta[i];
  }
  for (Eigen::Index i = 0; i < truth.size(); ++i)
    EXPECT_NEAR(mean(est[i]), truth[i], 3.0 * std_error(est[i])) << "component " << i;
}

TEST(ExactLikelihood, StationaryCovarianceIsToeplitz) {
  const CurveModel m = CurveModel::stationary_ar(2);
  const Eigen::VectorXd eta = vec({-0.5, 0.3, 1.2});
  const Eigen::MatrixXd S = model_covariance_matrix(m, eta, 40);
  const Eigen::VectorXd c = tv_autocovariances(m.to_spec(eta), 0.5, 39);
  for (int r = 0; r < 40; ++r)
    for (int s = 0; s < 40; ++s) EXPECT_NEAR(S(r, s), c[std::abs(r - s)], 1e-10);
}

// Model selection

TEST(Aic, PenaltyArithmetic) {
  EXPECT_LT(aic(1.5, 2, {1, 0}, 200), aic(1.5, 2, {2, 0}, 200));
  EXPECT_NEAR(aic(1.5, 2, {8, 0}, 128) - aic(1.5, 2, {6, 0}, 128), 4.0 / 128, 1e-15);
  EXPECT_DOUBLE_EQ(aic(2.0, 1, {0}, 100), std::log(2.0) + 4.0 / 100);
}

TEST(Aic, ScanArgminIsTableMinimum) {
  const Realization x = simulate(sweeping_peak_tvar2(), 128, 1);
  const ModelScan scan = model_scan(x, 3, 4, 16, 1);
  ASSERT_FALSE(scan.table.empty());
  double best = INFINITY;
  for (const ScanEntry& e : scan.table) {
    best = std::min(best, e.aic);
    double k = 0.0;
    for (int o : e.orders) k += o;
    EXPECT_NEAR(e.aic, std::log(e.sigma2) + 2.0 * (e.p + 1 + k) / 128, 1e-12);
  }
  EXPECT_EQ(scan.table[scan.best].aic, best);
}

// Limits

TEST(KlDivergence, CorrectlySpecifiedMinimum) {
  const CurveModel m(1, {1}, 0, -1, 1.0);
  const Eigen::VectorXd eta0 = vec({-0.3, -0.4});
  const TvModelSpec truth = m.to_spec(eta0);
  const OptimizerResult r = minimize_bfgs(
      [&](const Eigen::VectorXd& e) { return kl_divergence_limit(m, e, truth); },
      Eigen::VectorXd::Zero(2), tight());
  EXPECT_LT((r.x - eta0).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(KlDivergence, NonnegativeAroundTruth) {
  const CurveModel m(1, {1});
  const Eigen::VectorXd eta0 = vec({-0.3, -0.4, 1.2});
  const TvModelSpec truth = m.to_spec(eta0);
  const double l0 = kl_divergence_limit(m, eta0, truth);
  for (double d0 : {-0.1, 0.0, 0.1})
    for (double d1 : {-0.1, 0.0, 0.1})
      for (double d2 : {-0.2, 0.0, 0.2}) {
        const Eigen::VectorXd e = eta0 + vec({d0, d1, d2});
        EXPECT_GE(kl_divergence_limit(m, e, truth) - l0, -1e-12);
      }
}

TEST(KlDivergence, StationaryMeanIsTimeAverage) {
  TvModelSpec truth = make_tvar({ParameterCurve::polynomial({-0.5, 0.2})});
  truth.mu = ParameterCurve::polynomial({1.0, 1.0});
  const CurveModel m = CurveModel::stationary_ar(1, true);
  const OptimizerResult r = minimize_bfgs(
      [&](const Eigen::VectorXd& e) {
        return e[1] > 0.0 ? kl_divergence_limit(m, e, truth) : INFINITY;
      },
      vec({0.0, 1.0, 0.0}), tight());
  EXPECT_NEAR(r.x[m.mean_offset()], 1.5, 1e-4);
}

TEST(KlDivergence, NonPositiveDensityIsDomainError) {
  const CurveModel m = CurveModel::stationary_ar(1);
  EXPECT_THROW(kl_divergence_limit(m, vec({-0.3, -1.0}), ar1(-0.3)), DomainError);
}

TEST(AsymptoticCovariance, CorrectlySpecifiedVEqualsGamma) {
  const CurveModel m(2, {1, 0}, 1);
  const Eigen::VectorXd eta0 = vec({-0.6, 0.3, 0.25, 1.0, 0.4});
  const AsymptoticCovariance a = asymptotic_covariance(m, eta0, m.to_spec(eta0));
  EXPECT_LT((a.V - a.Gamma).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(AsymptoticCovariance, StationaryAr1FisherInformation) {
  const double phi = 0.6;
  const CurveModel m(1, {0}, 0, -1, 1.0);
  const AsymptoticCovariance a = asymptotic_covariance(m, vec({-phi}), ar1(-phi));
  EXPECT_NEAR(a.Gamma(0, 0), 1.0 / (1.0 - phi * phi), 1e-8);
}

TEST(AsymptoticCovariance, SandwichMatchesMonteCarlo) {
  const CurveModel m(1, {1}, 0, -1, 1.0);
  const Eigen::VectorXd eta0 = vec({-0.3, -0.4});
  const TvModelSpec truth = m.to_spec(eta0);
  const long T = 1024;
  const int R = 500;
  std::vector<Eigen::VectorXd> z(R);
  parallel_for(R, [&](std::size_t r) {
    const FitResult f = generalized_whittle_fit(simulate(truth, T, derive_seed(61, r)), m);
    z[r] = std::sqrt(static_cast<double>(T)) * (f.eta - eta0);
  });
  Eigen::Vector2d zbar = Eigen::Vector2d::Zero();
  for (const auto& v : z) zbar += v / R;
  Eigen::Matrix2d C = Eigen::Matrix2d::Zero();
  for (const auto& v : z) C += (v - zbar) * (v - zbar).transpose() / (R - 1);
  const AsymptoticCovariance a = asymptotic_covariance(m, eta0, truth);
  EXPECT_LE((C - a.sandwich).norm() / a.sandwich.norm(), 0.3);
}

// Sigma_T and U_T

TEST(Matrices, FlatIndexGivesIdentity) {
  const Eigen::MatrixXd U = build_u_matrix([](double, double) { return 1.0 / (2.0 * pi); }, 16);
  EXPECT_LT((U - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Matrices, ConstantTransferGivesScaledIdentity) {
  const TransferFunction A = [](double, double) { return std::complex<double>(1.7, 0.0); };
  const Eigen::MatrixXd S = build_sigma_matrix(A, A, 12);
  EXPECT_LT((S - 1.7 * 1.7 * Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Matrices, StationarySigmaIsSymmetricToeplitz) {
  const TvModelSpec spec = make_tvar({ParameterCurve::constant(-0.5), ParameterCurve::constant(0.2)});
  const Eigen::MatrixXd S = build_sigma_matrix(spec, 30);
  EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  for (int r = 1; r < 30; ++r)
    for (int s = 1; s < 30; ++s) EXPECT_NEAR(S(r, s), S(r - 1, s - 1), 1e-12);
  EXPECT_NEAR(S(3, 1), tv_covariance(spec, 0.5, 2), 1e-10);
}

TEST(Matrices, WhiteNoiseGapIsZero) {
  const TvModelSpec spec = make_tvar({}, ParameterCurve::constant(1.3));
  EXPECT_LT(matrix_approximation_gap(spec, 64), 1e-20);
}

TEST(Matrices, GapDecays) {
  EXPECT_LT(matrix_approximation_gap(ar1(-0.5), 256), matrix_approximation_gap(ar1(-0.5), 64) / 2);
}

TEST(Matrices, SzegoResidualDecays) {
  const double r128 = std::abs(szego_check(ar1(-0.5), 128));
  const double r512 = std::abs(szego_check(ar1(-0.5), 512));
  EXPECT_LE(r512, 0.05);
  EXPECT_LT(r512, r128);
}
