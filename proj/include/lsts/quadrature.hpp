#pragma once

#include <vector>

namespace lsts {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

//! Gauss-Legendre rule with n in {16, 32, 64} nodes on [a,b].
QuadratureRule gauss_legendre(int n, double a, double b);

//! `panels` copies of the 16-node Gauss-Legendre rule tiling [a,b].
QuadratureRule composite_gauss_legendre(int panels, double a, double b);

//! Periodic trapezoid on [-pi, pi): nodes -pi + 2 pi j / n, equal weights 2 pi / n.
QuadratureRule periodic_trapezoid(int n);

}  // namespace lsts
