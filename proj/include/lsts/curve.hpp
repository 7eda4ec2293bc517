#pragma once

#include <variant>
#include <vector>

namespace lsts {

//! A real function on rescaled time [0,1], extended by its endpoint values
//! outside the unit interval.
class ParameterCurve {
 public:
  enum class Kind { constant, polynomial, trig, logistic, sampled };

  struct Constant {
    double value;
  };
  //! sum_k coefficients[k] * u^k
  struct Polynomial {
    std::vector<double> coefficients;
  };
  //! offset + amplitude * cos(frequency*u + phase
  //!                           + inner_amplitude * cos(inner_frequency*u + inner_phase))
  struct Trig {
    double offset = 0.0;
    double amplitude = 1.0;
    double frequency = 0.0;
    double phase = 0.0;
    double inner_amplitude = 0.0;
    double inner_frequency = 0.0;
    double inner_phase = 0.0;
  };
  //! start + (end - start) / (1 + exp(-gamma (u - location)))
  struct Logistic {
    double start;
    double end;
    double gamma;
    double location;
  };
  //! Piecewise linear through (nodes[i], values[i]); nodes increasing in [0,1].
  struct Sampled {
    std::vector<double> nodes;
    std::vector<double> values;
  };

  using Representation = std::variant<Constant, Polynomial, Trig, Logistic, Sampled>;

  ParameterCurve() : rep_(Constant{0.0}) {}
  explicit ParameterCurve(Representation rep);

  static ParameterCurve constant(double value);
  static ParameterCurve polynomial(std::vector<double> coefficients);
  static ParameterCurve trig(const Trig& t);
  //! Equispaced samples on [0,1].
  static ParameterCurve sampled(std::vector<double> values);
  static ParameterCurve sampled(std::vector<double> nodes, std::vector<double> values);

  Kind kind() const;
  const Representation& representation() const { return rep_; }

  //! Highest derivative order available in closed form; -1 means unbounded.
  int derivative_order_available() const;

  double operator()(double u) const { return value(u); }
  double value(double u) const;
  //! order-th derivative at u (clamped to [0,1]); throws CapabilityError
  //! if the representation cannot supply it.
  double derivative(double u, int order) const;

  bool is_constant() const;

 private:
  Representation rep_;
};

//! a(u) = start + G(u; gamma, c) (end - start) with the logistic transition G.
ParameterCurve logistic_transition_curve(double start, double end, double gamma, double c);

}  // namespace lsts
