#pragma once

#include <functional>
#include <string>
#include <vector>

namespace lsts {

//! Symmetric probability kernel supported on [-1/2, 1/2].
class Kernel {
 public:
  enum class Kind { rectangular, canonical_quadratic, custom };

  static Kernel rectangular();
  //! K(x) = 6 (1/4 - x^2), the MSE-optimal kernel.
  static Kernel canonical_quadratic();
  //! Piecewise linear through equispaced samples on [0, 1/2] (mirrored to the
  //! left), rescaled to integrate to one.
  static Kernel sampled(std::vector<double> half_values);
  //! Arbitrary nonnegative evaluator on [-1/2,1/2]; normalized by quadrature.
  static Kernel custom(std::function<double(double)> k, std::string name = "custom");
  static Kernel from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double x) const;

  double integral() const { return integral_; }
  //! d_K = int x^2 K(x) dx
  double d() const { return d_; }
  //! v_K = int K(x)^2 dx
  double v() const { return v_; }
  //! C(K) = v_K / d_K^2
  double bandwidth_constant() const { return v_ / (d_ * d_); }
  //! c(K) = v_K d_K^{1/2}
  double mse_constant() const;

 private:
  Kernel(Kind kind, std::string name, std::function<double(double)> k, bool normalize);

  Kind kind_;
  std::string name_;
  std::function<double(double)> k_;
  double scale_ = 1.0;
  double integral_ = 1.0;
  double d_ = 0.0;
  double v_ = 0.0;
};

//! Data taper on [0,1] with h(x) = h(1-x).
class Taper {
 public:
  enum class Kind { rectangular, sine_squared, custom };

  static Taper rectangular();
  //! h(x) = sin^2(pi x)
  static Taper sine_squared();
  //! Piecewise linear through equispaced samples on [0,1]; must be symmetric.
  static Taper sampled(std::vector<double> values);
  //! h(x) = sqrt(K(x - 1/2)), so that the induced time kernel equals K.
  static Taper from_kernel(const Kernel& k);
  static Taper custom(std::function<double(double)> h, std::string name = "custom");
  static Taper from_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double x) const;

  //! Induced time kernel K_t(x) = h(x + 1/2)^2 / int h^2.
  Kernel induced_kernel() const;

 private:
  Taper(Kind kind, std::string name, std::function<double(double)> h);

  Kind kind_;
  std::string name_;
  std::function<double(double)> h_;
};

}  // namespace lsts
