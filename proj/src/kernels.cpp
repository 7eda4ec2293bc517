#include "lsts/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lsts/errors.hpp"
#include "lsts/quadrature.hpp"

namespace lsts {

namespace {

const QuadratureRule& kernel_rule() {
  static const QuadratureRule rule = composite_gauss_legendre(64, -0.5, 0.5);
  return rule;
}

const QuadratureRule& taper_rule() {
  static const QuadratureRule rule = composite_gauss_legendre(64, 0.0, 1.0);
  return rule;
}

double interpolate_equispaced(const std::vector<double>& v, double x) {
  const double pos = x * static_cast<double>(v.size() - 1);
  if (pos <= 0.0) return v.front();
  if (pos >= static_cast<double>(v.size() - 1)) return v.back();
  const size_t i = static_cast<size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

}  // namespace

Kernel::Kernel(Kind kind, std::string name, std::function<double(double)> k, bool normalize)
    : kind_(kind), name_(std::move(name)), k_(std::move(k)) {
  const auto& rule = kernel_rule();
  const double mass = rule.integrate(k_);
  if (!(mass > 0.0)) throw ArgumentError("kernel must have positive mass");
  if (normalize) scale_ = 1.0 / mass;
  integral_ = rule.integrate([&](double x) { return (*this)(x); });
  d_ = rule.integrate([&](double x) { return x * x * (*this)(x); });
  v_ = rule.integrate([&](double x) { return std::pow((*this)(x), 2); });
}

double Kernel::operator()(double x) const {
  if (x < -0.5 || x > 0.5) return 0.0;
  return scale_ * k_(x);
}

double Kernel::mse_constant() const { return v_ * std::sqrt(d_); }

Kernel Kernel::rectangular() {
  return Kernel(Kind::rectangular, "rectangular", [](double) { return 1.0; }, false);
}

Kernel Kernel::canonical_quadratic() {
  return Kernel(Kind::canonical_quadratic, "canonical-quadratic",
                [](double x) { return 6.0 * (0.25 - x * x); }, false);
}

Kernel Kernel::sampled(std::vector<double> half_values) {
  if (half_values.size() < 2) throw ArgumentError("sampled kernel needs at least two values");
  if (std::any_of(half_values.begin(), half_values.end(), [](double v) { return v < 0.0; }))
    throw ArgumentError("kernel values must be nonnegative");
  return Kernel(
      Kind::custom, "sampled",
      [v = std::move(half_values)](double x) { return interpolate_equispaced(v, 2.0 * std::abs(x)); },
      true);
}

Kernel Kernel::custom(std::function<double(double)> k, std::string name) {
  return Kernel(Kind::custom, std::move(name), std::move(k), true);
}

Kernel Kernel::from_name(const std::string& name) {
  if (name == "rectangular" || name == "uniform") return rectangular();
  if (name == "canonical-quadratic" || name == "quadratic" || name == "epanechnikov")
    return canonical_quadratic();
  throw ArgumentError("unknown kernel '" + name + "'");
}

Taper::Taper(Kind kind, std::string name, std::function<double(double)> h)
    : kind_(kind), name_(std::move(name)), h_(std::move(h)) {}

double Taper::operator()(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  return h_(x);
}

Taper Taper::rectangular() {
  return Taper(Kind::rectangular, "rectangular", [](double) { return 1.0; });
}

Taper Taper::sine_squared() {
  return Taper(Kind::sine_squared, "sine-squared", [](double x) {
    const double s = std::sin(std::numbers::pi * x);
    return s * s;
  });
}

Taper Taper::sampled(std::vector<double> values) {
  if (values.size() < 2) throw ArgumentError("sampled taper needs at least two values");
  const size_t n = values.size();
  for (size_t i = 0; i < n; ++i) {
    if (values[i] < 0.0) throw ArgumentError("taper values must be nonnegative");
    if (std::abs(values[i] - values[n - 1 - i]) > 1e-12)
      throw ArgumentError("taper samples must satisfy h(x) = h(1-x)");
  }
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
    throw ArgumentError("taper must not vanish identically");
  return Taper(Kind::custom, "sampled",
               [v = std::move(values)](double x) { return interpolate_equispaced(v, x); });
}

Taper Taper::from_kernel(const Kernel& k) {
  return Taper(Kind::custom, "sqrt-" + k.name(),
               [k](double x) { return std::sqrt(std::max(0.0, k(x - 0.5))); });
}

Taper Taper::custom(std::function<double(double)> h, std::string name) {
  return Taper(Kind::custom, std::move(name), std::move(h));
}

Taper Taper::from_name(const std::string& name) {
  if (name == "rectangular" || name == "none") return rectangular();
  if (name == "sine-squared" || name == "hann" || name == "hanning") return sine_squared();
  if (name == "canonical-quadratic" || name == "quadratic")
    return from_kernel(Kernel::canonical_quadratic());
  throw ArgumentError("unknown taper '" + name + "'");
}

Kernel Taper::induced_kernel() const {
  const double h2 = taper_rule().integrate([&](double x) { return std::pow((*this)(x), 2); });
  if (!(h2 > 0.0)) throw ArgumentError("taper must not vanish identically");
  Taper self = *this;
  return Kernel::custom([self, h2](double x) { return std::pow(self(x + 0.5), 2) / h2; },
                        "induced-" + name_);
}

}  // namespace lsts
