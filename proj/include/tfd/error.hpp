#pragma once

#include <stdexcept>
#include <string>

namespace tfd {

// Base of every numerical failure raised by the library.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A series ran out of terms (or lost too many digits) before the tail test held.
class NonConvergent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The image sum of a theta function needs more than max_m images.
class TruncationCapReached : public NumericalError {
 public:
  TruncationCapReached(const std::string& what, double achieved_bound)
      : NumericalError(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const { return achieved_bound_; }

 private:
  double achieved_bound_;
};

class QuadratureFailure : public NumericalError {
 public:
  QuadratureFailure(const std::string& what, double estimate)
      : NumericalError(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

// The part of a Laplace integral beyond the sampled horizon is too large.
class TailDominates : public NumericalError {
 public:
  TailDominates(const std::string& what, double tail)
      : NumericalError(what), tail_(tail) {}
  double tail() const { return tail_; }

 private:
  double tail_;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ScenarioUnknown : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tfd
