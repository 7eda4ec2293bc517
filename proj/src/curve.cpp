#include "lsts/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

double polynomial_derivative(const std::vector<double>& c, double u, int order) {
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= order; --k) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
    acc = acc * u + falling * c[static_cast<size_t>(k)];
  }
  return acc;
}

double trig_derivative(const ParameterCurve::Trig& t, double u, int order) {
  const double inner_arg = t.inner_frequency * u + t.inner_phase;
  const double g = t.frequency * u + t.phase + t.inner_amplitude * std::cos(inner_arg);
  const double g1 = t.frequency - t.inner_amplitude * t.inner_frequency * std::sin(inner_arg);
  const double g2 = -t.inner_amplitude * t.inner_frequency * t.inner_frequency * std::cos(inner_arg);
  switch (order) {
    case 0:
      return t.offset + t.amplitude * std::cos(g);
    case 1:
      return -t.amplitude * std::sin(g) * g1;
    case 2:
      return -t.amplitude * (std::cos(g) * g1 * g1 + std::sin(g) * g2);
    default:
      throw CapabilityError("trig curve: derivative order " + std::to_string(order) +
                            " not available");
  }
}

double logistic_derivative(const ParameterCurve::Logistic& l, double u, int order) {
  const double G = 1.0 / (1.0 + std::exp(-l.gamma * (u - l.location)));
  const double d = l.end - l.start;
  switch (order) {
    case 0:
      return l.start + d * G;
    case 1:
      return d * l.gamma * G * (1.0 - G);
    case 2:
      return d * l.gamma * l.gamma * G * (1.0 - G) * (1.0 - 2.0 * G);
    default:
      throw CapabilityError("logistic curve: derivative order " + std::to_string(order) +
                            " not available");
  }
}

double sampled_value(const ParameterCurve::Sampled& s, double u) {
  const auto& x = s.nodes;
  const auto& y = s.values;
  if (u <= x.front()) return y.front();
  if (u >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), u);
  const size_t i = static_cast<size_t>(it - x.begin());
  const double w = (u - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

}  // namespace

ParameterCurve::ParameterCurve(Representation rep) : rep_(std::move(rep)) {
  if (auto* s = std::get_if<Sampled>(&rep_)) {
    if (s->nodes.size() != s->values.size() || s->nodes.size() < 2)
      throw ArgumentError("sampled curve needs at least two (node, value) pairs");
    if (!std::is_sorted(s->nodes.begin(), s->nodes.end()) ||
        std::adjacent_find(s->nodes.begin(), s->nodes.end()) != s->nodes.end())
      throw ArgumentError("sampled curve nodes must be strictly increasing");
  }
  if (auto* l = std::get_if<Logistic>(&rep_)) {
    if (!(l->gamma > 0.0)) throw ArgumentError("logistic curve requires gamma > 0");
  }
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    if (p->coefficients.empty()) p->coefficients.push_back(0.0);
  }
}

ParameterCurve ParameterCurve::constant(double value) { return ParameterCurve(Constant{value}); }

ParameterCurve ParameterCurve::polynomial(std::vector<double> coefficients) {
  return ParameterCurve(Polynomial{std::move(coefficients)});
}

ParameterCurve ParameterCurve::trig(const Trig& t) { return ParameterCurve(t); }

ParameterCurve ParameterCurve::sampled(std::vector<double> values) {
  const size_t n = values.size();
  if (n < 2) throw ArgumentError("sampled curve needs at least two values");
  std::vector<double> nodes(n);
  for (size_t i = 0; i < n; ++i) nodes[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return ParameterCurve(Sampled{std::move(nodes), std::move(values)});
}

ParameterCurve ParameterCurve::sampled(std::vector<double> nodes, std::vector<double> values) {
  return ParameterCurve(Sampled{std::move(nodes), std::move(values)});
}

ParameterCurve::Kind ParameterCurve::kind() const {
  return static_cast<Kind>(rep_.index());
}

int ParameterCurve::derivative_order_available() const {
  return std::visit(overloaded{[](const Constant&) { return -1; },
                               [](const Polynomial&) { return -1; },
                               [](const Trig&) { return 2; },
                               [](const Logistic&) { return 2; },
                               [](const Sampled&) { return 0; }},
                    rep_);
}

double ParameterCurve::value(double u) const { return derivative(u, 0); }

double ParameterCurve::derivative(double u, int order) const {
  if (order < 0) throw ArgumentError("negative derivative order");
  const double x = clamp01(u);
  return std::visit(
      overloaded{
          [&](const Constant& c) { return order == 0 ? c.value : 0.0; },
          [&](const Polynomial& p) { return polynomial_derivative(p.coefficients, x, order); },
          [&](const Trig& t) { return trig_derivative(t, x, order); },
          [&](const Logistic& l) { return logistic_derivative(l, x, order); },
          [&](const Sampled& s) {
            if (order > 0)
              throw CapabilityError("sampled curve has no analytic derivatives");
            return sampled_value(s, x);
          }},
      rep_);
}

bool ParameterCurve::is_constant() const {
  return std::visit(
      overloaded{[](const Constant&) { return true; },
                 [](const Polynomial& p) {
                   return std::all_of(p.coefficients.begin() + 1, p.coefficients.end(),
                                      [](double c) { return c == 0.0; });
                 },
                 [](const Trig& t) {
                   return t.amplitude == 0.0 ||
                          (t.frequency == 0.0 &&
                           (t.inner_amplitude == 0.0 || t.inner_frequency == 0.0));
                 },
                 [](const Logistic& l) { return l.start == l.end; },
                 [](const Sampled& s) {
                   return std::all_of(s.values.begin(), s.values.end(),
                                      [&](double v) { return v == s.values.front(); });
                 }},
      rep_);
}

ParameterCurve logistic_transition_curve(double start, double end, double gamma, double c) {
  if (!(gamma > 0.0)) throw ArgumentError("logistic transition requires gamma > 0");
  if (c < 0.0 || c > 1.0) throw ArgumentError("logistic transition location must lie in [0,1]");
  if (start == end) return ParameterCurve::constant(start);
  return ParameterCurve(ParameterCurve::Logistic{start, end, gamma, c});
}

}  // namespace lsts
