#pragma once

#include <stdexcept>
#include <string>

namespace lsts {

// Bad arguments: out-of-range sizes, lags, grids, bandwidths.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// AR polynomial has a root inside the closed (1+delta)-disc at some u.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double u)
      : std::runtime_error(what), u_(u) {}
  double u() const { return u_; }

 private:
  double u_;
};

// A curve was asked for a derivative it cannot provide.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty or degenerate estimation window.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular (or numerically singular) linear system.
class RankError : public std::runtime_error {
 public:
  RankError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Covariance matrix failed a Cholesky factorization.
class DefinitenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Curvature term vanishes so the plug-in bandwidth is unbounded.
class NearStationaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not defined for the model family.
class UnsupportedFamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectral density not strictly positive where it is integrated.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (T, N, S) does not tile the sample.
class SegmentationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lsts
