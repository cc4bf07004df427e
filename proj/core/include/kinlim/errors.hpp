#pragma once

#include <stdexcept>
#include <string>

namespace kinlim {

// Gauss-Hermite node iteration failed, or the resulting rule is not exact.
class QuadratureDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// nu0 dt / eps^(1+q) is not finite.
class StiffnessOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time stepping hit max_steps above the steady tolerance.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual, long steps)
      : std::runtime_error(what), residual_(residual), steps_(steps) {}
  double residual() const { return residual_; }
  long steps() const { return steps_; }

 private:
  double residual_;
  long steps_;
};

// A stationary solve was handed forcing with a non-zero mean mode.
class SingularMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Picard iteration for the stationary NSF system stopped contracting.
class NoContraction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// report was asked to merge nothing.
class EmptyInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinlim
