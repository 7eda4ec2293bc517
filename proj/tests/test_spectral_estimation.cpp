#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lsts/curve.hpp"
#include "lsts/errors.hpp"
#include "lsts/kernels.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/process_models.hpp"
#include "lsts/spectral_estimation.hpp"

using namespace lsts;
using std::numbers::pi;

namespace {

Realization series(std::vector<double> v) {
  Realization r;
  r.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return r;
}

Eigen::VectorXd one(double x) { return Eigen::VectorXd::Constant(1, x); }

TvModelSpec cosine_tvar1() {
  ParameterCurve::Trig t;
  t.offset = -0.5;
  t.amplitude = -0.2;
  t.frequency = 2.0 * pi;
  return make_tvar({ParameterCurve::trig(t)});
}

double mean(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / xs.size();
}

double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / (xs.size() - 1);
}

}  // namespace

TEST(SegmentPeriodogram, ZeroDataIsZero) {
  const Realization x = series(std::vector<double>(64, 0.0));
  const SegmentPeriodogram I = segment_periodogram(x, 0.5, 32, Taper::sine_squared());
  EXPECT_EQ(I.on_fourier_grid(64).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(I(1.3), 0.0);
}

TEST(SegmentPeriodogram, FullRectangularSegmentIsClassicalPeriodogram) {
  const Realization x = simulate(make_tvar({}), 128, 4);
  const SegmentPeriodogram I = segment_periodogram(x, 0.5, 128, Taper::rectangular());
  const Eigen::VectorXd lam = fourier_frequencies(128);
  const Eigen::VectorXd full = periodogram(x, lam);
  const Eigen::VectorXd seg = I.on_fourier_grid(128);
  EXPECT_LT((seg - full).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + full.maxCoeff()));
  for (double l : {0.3, 1.7, 2.9}) EXPECT_NEAR(I(l), periodogram(x, one(l))[0], 1e-12);
}

TEST(SegmentPeriodogram, ParsevalWithTaperedCovariance) {
  const Realization x = simulate(sweeping_peak_tvar2(), 512, 9);
  const Taper h = Taper::sine_squared();
  const long N = 100;
  const SegmentPeriodogram I = segment_periodogram(x, 0.4, N, h);
  const double c0 = tapered_local_covariance(x, 0.4, 0, N, h).value[0];
  for (long M : {N, 256L}) {
    const double integral = 2.0 * pi / M * I.on_fourier_grid(M).sum();
    EXPECT_NEAR(integral, c0, 1e-10 * c0) << "M " << M;
  }
}

TEST(SegmentPeriodogram, ConstantShiftInvisibleAtNonzeroFourierFrequencies) {
  const Realization x = simulate(make_tvar({}), 64, 12);
  Realization shifted = x;
  shifted.values.array() += 3.7;
  const Eigen::VectorXd a =
      segment_periodogram(x, 0.5, 64, Taper::rectangular()).on_fourier_grid(64);
  const Eigen::VectorXd b =
      segment_periodogram(shifted, 0.5, 64, Taper::rectangular()).on_fourier_grid(64);
  for (int j = 1; j < 64; ++j) EXPECT_NEAR(a[j], b[j], 1e-12 * (1.0 + a[j])) << "j " << j;
  EXPECT_GT(b[0], a[0]);
}

TEST(PrePeriodogram, TwoPointHandValues) {
  const Realization x = series({1.0, 1.0});
  for (double l : {0.0, 0.7, 2.0}) {
    EXPECT_NEAR(pre_periodogram(x, 1, one(l))[0], (1.0 + 2.0 * std::cos(l)) / (2.0 * pi), 1e-15);
    EXPECT_NEAR(pre_periodogram(x, 2, one(l))[0], 1.0 / (2.0 * pi), 1e-15);
  }
}

TEST(PrePeriodogram, CanBeNegative) {
  const Realization x = series({1.0, -1.0});
  const double j = pre_periodogram(x, 1, one(0.0))[0];
  EXPECT_NEAR(j, -1.0 / (2.0 * pi), 1e-15);
  EXPECT_LT(j, 0.0);
}

TEST(PrePeriodogram, ZeroDataAndRangeErrors) {
  const Realization x = series(std::vector<double>(10, 0.0));
  EXPECT_EQ(pre_periodogram(x, 5, fourier_frequencies(10)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(pre_periodogram(x, 0, one(0.0)), ArgumentError);
  EXPECT_THROW(pre_periodogram(x, 11, one(0.0)), ArgumentError);
}

TEST(PrePeriodogram, GridMatchesSingleTime) {
  const Realization x = simulate(sweeping_peak_tvar2(), 33, 2);
  const Eigen::VectorXd lam = lambda_grid(16);
  const Eigen::MatrixXd g = pre_periodogram_grid(x, lam);
  for (long t : {1L, 7L, 17L, 33L})
    EXPECT_LT((g.row(t - 1).transpose() - pre_periodogram(x, t, lam)).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(PeriodogramIdentity, TwoPointAverage) {
  const Realization x = series({1.0, 1.0});
  EXPECT_LT(periodogram_identity_check(x, fourier_frequencies(2)), 1e-15);
  for (double l : {0.0, 1.1, pi}) {
    const double avg =
        0.5 * (pre_periodogram(x, 1, one(l))[0] + pre_periodogram(x, 2, one(l))[0]);
    EXPECT_NEAR(avg, (1.0 + std::cos(l)) / (2.0 * pi), 1e-15);
    EXPECT_NEAR(periodogram(x, one(l))[0], avg, 1e-15);
  }
}

TEST(PeriodogramIdentity, HoldsForRandomData) {
  for (long T : {2L, 16L, 128L, 256L}) {
    const Eigen::VectorXd lam = fourier_frequencies(T);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const Realization x = simulate(make_tvar({}), T, seed);
      const double scale = 1.0 + periodogram(x, lam).maxCoeff();
      EXPECT_LE(periodogram_identity_check(x, lam), 1e-10 * scale) << "T " << T;
    }
  }
}

TEST(PeriodogramIdentity, ZeroData) {
  const Realization x = series(std::vector<double>(16, 0.0));
  EXPECT_EQ(periodogram_identity_check(x, fourier_frequencies(16)), 0.0);
}

TEST(SmoothedSpectrum, WhiteNoiseLevelMonteCarlo) {
  std::vector<double> est;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Realization x = simulate(make_tvar({}), 4096, seed);
    est.push_back(smoothed_tv_spectrum(x, one(0.5), one(pi / 2), 0.1, 0.3).values(0, 0));
  }
  const double se = std::sqrt(variance(est) / est.size());
  EXPECT_NEAR(mean(est), 1.0 / (2.0 * pi), 3.0 * se);
}

TEST(SmoothedSpectrum, SegmentFormIsNonnegative) {
  const Realization x = simulate(sweeping_peak_tvar2(), 512, 6);
  const SpectralGrid g = smoothed_tv_spectrum(x, u_grid(20), lambda_grid(40), 0.15, 0.2);
  EXPECT_GE(g.values.minCoeff(), 0.0);
  EXPECT_TRUE(g.values.allFinite());
}

TEST(SmoothedSpectrum, BothFormsTrackSmoothSpectrum) {
  const Realization x = simulate(cosine_tvar1(), 16384, 8);
  const Eigen::VectorXd u = u_grid(8, 0.2, 0.8);
  const Eigen::VectorXd lam = lambda_grid(16);
  const SpectralGrid a = smoothed_tv_spectrum(x, u, lam, 0.1, 0.3);
  const SpectralGrid b = smoothed_tv_spectrum_kernel(x, u, lam, 0.1, 0.3);
  const SpectralGrid f = true_tv_spectrum(cosine_tvar1(), u, lam);
  const double rel_a = ((a.values - f.values).array().abs() / f.values.array()).mean();
  const double rel_b = ((b.values - f.values).array().abs() / f.values.array()).mean();
  EXPECT_LT(rel_a, 0.25);
  EXPECT_LT(rel_b, 0.25);
}

TEST(SmoothedSpectrum, RidgeFollowsPeakFrequency) {
  const TvModelSpec spec = sweeping_peak_tvar2();
  const Realization x = simulate(spec, 1024, 21);
  const Eigen::VectorXd u = u_grid(18, 0.05, 0.95);
  const Eigen::VectorXd lam = lambda_grid(256);
  const SpectralGrid g = smoothed_tv_spectrum(x, u, lam, 64.0 / 1024.0, 0.15);
  double mad = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    Eigen::Index j;
    g.values.row(i).maxCoeff(&j);
    mad += std::abs(lam[j] - (1.5 - std::cos(4.0 * pi * u[i])));
  }
  EXPECT_LE(mad / u.size(), 0.25);
}

TEST(SmoothedSpectrum, DegenerateBandwidths) {
  const Realization x = simulate(make_tvar({}), 256, 1);
  EXPECT_THROW(smoothed_tv_spectrum(x, one(0.5), one(1.0), 0.001, 0.3), WindowError);
  EXPECT_THROW(smoothed_tv_spectrum(x, one(0.5), one(1.0), 0.2, 0.0), WindowError);
  EXPECT_THROW(smoothed_tv_spectrum(x, one(0.5), one(1.0), 0.2, 4.0), WindowError);
}

TEST(SmoothedSpectrum, TimeBiasLaw) {
  const TvModelSpec spec = cosine_tvar1();
  const long T = 8192;
  const long N = 1024;
  const double u0 = 0.5;
  const double lam = 0.0;
  const Taper h = Taper::sine_squared();
  std::vector<double> diff;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const double a = segment_periodogram(simulate(spec, T, seed), u0, N, h)(lam);
    const double b =
        segment_periodogram(stationary_approximation(spec, u0, T, seed), u0, N, h)(lam);
    diff.push_back(a - b);
  }
  // E I(X~) exactly: (1/2pi H) sum_k c(k) w(k) cos(lam k), w(k) = sum_s h(s/N) h((s+k)/N).
  const Eigen::VectorXd c = tv_autocovariances(spec, u0, N - 1);
  double H = 0.0;
  for (long s = 1; s <= N; ++s) H += std::pow(h(static_cast<double>(s) / N), 2);
  double stationary_mean = 0.0;
  for (long k = -(N - 1); k <= N - 1; ++k) {
    double w = 0.0;
    for (long s = 1; s + std::abs(k) <= N; ++s)
      w += h(static_cast<double>(s) / N) * h(static_cast<double>(s + std::abs(k)) / N);
    stationary_mean += c[std::abs(k)] * w * std::cos(lam * k);
  }
  stationary_mean /= 2.0 * pi * H;
  const double bias = mean(diff) + stationary_mean - tv_spectral_density(spec, u0, lam);
  const double step = 1e-3;
  const double f_uu = (tv_spectral_density(spec, u0 + step, lam) -
                       2.0 * tv_spectral_density(spec, u0, lam) +
                       tv_spectral_density(spec, u0 - step, lam)) /
                      (step * step);
  const double b_t = static_cast<double>(N) / T;
  const double theory = 0.5 * b_t * b_t * h.induced_kernel().d() * f_uu;
  EXPECT_LE(std::abs(bias - theory), 0.3 * std::abs(theory)) << bias << " vs " << theory;
}

TEST(SmoothedSpectrum, VarianceLaw) {
  const TvModelSpec spec = cosine_tvar1();
  const long T = 4096;
  const double b_t = 0.1;
  const double b_f = 0.3;
  const double u0 = 0.5;
  const double lam = pi / 2;
  SmoothingOptions opt;
  std::vector<double> est;
  for (std::uint64_t seed = 1; seed <= 500; ++seed)
    est.push_back(
        smoothed_tv_spectrum(simulate(spec, T, seed), one(u0), one(lam), b_t, b_f, opt)
            .values(0, 0));
  const double f = tv_spectral_density(spec, u0, lam);
  const double theory = 2.0 * pi * f * f * opt.taper.induced_kernel().v() * opt.kernel_f.v() /
                        (b_t * b_f * T);
  EXPECT_NEAR(variance(est) / theory, 1.0, 0.25);
}

TEST(SpectralBandwidths, SwapSymmetry) {
  const SpectralBandwidths a = optimal_spectral_bandwidths(3.0, 0.5, 100000);
  const SpectralBandwidths b = optimal_spectral_bandwidths(0.5, 3.0, 100000);
  EXPECT_NEAR(a.unclipped_b_t, b.unclipped_b_f, 1e-14);
  EXPECT_NEAR(a.unclipped_b_f, b.unclipped_b_t, 1e-14);
}

TEST(SpectralBandwidths, UnitCurvatures) {
  const SpectralBandwidths s = optimal_spectral_bandwidths(1.0, 1.0, 4096);
  const double expected = std::pow(576.0 * pi, 1.0 / 6.0) * std::pow(4096.0, -1.0 / 6.0);
  EXPECT_NEAR(std::pow(576.0 * pi, 1.0 / 6.0), 3.4908, 1e-4);
  EXPECT_NEAR(s.unclipped_b_t, expected, 1e-14);
  EXPECT_NEAR(s.unclipped_b_f, expected, 1e-14);
  EXPECT_NEAR(s.b_t, 0.8727, 1e-4);
  EXPECT_NEAR(s.N_opt, s.b_t * 4096.0, 1e-9);
  EXPECT_DOUBLE_EQ(s.rate_exponent, -2.0 / 3.0);
}

TEST(SpectralBandwidths, ClippingAndFlatDirections) {
  const SpectralBandwidths s = optimal_spectral_bandwidths(1e-4, 1.0, 4096);
  EXPECT_GT(s.unclipped_b_t, 1.0);
  EXPECT_EQ(s.b_t, 1.0);
  EXPECT_THROW(optimal_spectral_bandwidths(0.0, 1.0, 4096), NearStationaryError);
  EXPECT_THROW(optimal_spectral_bandwidths(1.0, 0.0, 4096), NearStationaryError);
  EXPECT_THROW(optimal_spectral_bandwidths(make_tvar({ParameterCurve::constant(-0.5)}), 0.5,
                                           1.0, 4096),
               NearStationaryError);
}

TEST(SpectralBandwidths, ModelCurvaturesByDifferences) {
  const TvModelSpec spec = cosine_tvar1();
  const double u = 0.3;
  const double l = 0.8;
  const SpectralBandwidths s = optimal_spectral_bandwidths(spec, u, l, 4096);
  const double h = 1e-3;
  const double f = tv_spectral_density(spec, u, l);
  const double fuu = (tv_spectral_density(spec, u + h, l) - 2 * f +
                      tv_spectral_density(spec, u - h, l)) /
                     (h * h);
  EXPECT_NEAR(s.delta_u, fuu / f, 1e-6 * std::abs(fuu / f));
}

TEST(TrueSpectrum, MatchesDensity) {
  const TvModelSpec spec = sweeping_peak_tvar2();
  const SpectralGrid g = true_tv_spectrum(spec, u_grid(4), lambda_grid(8));
  EXPECT_DOUBLE_EQ(g.values(2, 3), tv_spectral_density(spec, g.u[2], g.lambda[3]));
}
