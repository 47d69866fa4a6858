#pragma once

#include <stdexcept>
#include <string>

namespace ratelab {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain argument (dimension mismatch, λ ∉ [0,1], ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A modulus returned a value outside its admissible range.
class ModulusError : public Error {
 public:
  using Error::Error;
};

/// A precondition on rate objects is missing (e.g. an absent monotonicity flag).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An inner fixed-point solve ran out of its iteration budget.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Trajectory extension was refused because it exceeds the configured horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ratelab
