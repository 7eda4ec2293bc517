#include "lsts/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <numbers>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

template <unsigned N>
QuadratureRule make_rule(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  QuadratureRule r;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(mid);
      r.weights.push_back(half * w[i]);
      continue;
    }
    r.nodes.push_back(mid - half * x[i]);
    r.weights.push_back(half * w[i]);
    r.nodes.push_back(mid + half * x[i]);
    r.weights.push_back(half * w[i]);
  }
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  switch (n) {
    case 16:
      return make_rule<16>(a, b);
    case 32:
      return make_rule<32>(a, b);
    case 64:
      return make_rule<64>(a, b);
    default:
      throw ArgumentError("Gauss-Legendre rule available for 16, 32 or 64 nodes");
  }
}

QuadratureRule composite_gauss_legendre(int panels, double a, double b) {
  if (panels < 1) throw ArgumentError("need at least one panel");
  QuadratureRule out;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const QuadratureRule r = make_rule<16>(a + k * h, a + (k + 1) * h);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

QuadratureRule periodic_trapezoid(int n) {
  if (n < 1) throw ArgumentError("need at least one node");
  using std::numbers::pi;
  QuadratureRule r;
  r.nodes.resize(static_cast<size_t>(n));
  r.weights.assign(static_cast<size_t>(n), 2.0 * pi / n);
  for (int j = 0; j < n; ++j) r.nodes[static_cast<size_t>(j)] = -pi + 2.0 * pi * j / n;
  return r;
}

}  // namespace lsts
