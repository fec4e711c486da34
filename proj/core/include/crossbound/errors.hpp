#pragma once

#include <stdexcept>
#include <string>

namespace crossbound {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem or grid parameters (spacing does not land on the arm
/// boundary, odd N, beta out of range, ...).
class InvalidGrid : public Error {
 public:
  using Error::Error;
};

/// Eigensolver ran out of iterations before meeting the residual contract.
class NonConvergence : public Error {
 public:
  NonConvergence(int iterations, double best_residual)
      : Error("eigensolver did not converge after " +
              std::to_string(iterations) +
              " iterations (best relative residual " +
              std::to_string(best_residual) + ")"),
        iterations(iterations),
        best_residual(best_residual) {}

  int iterations;
  double best_residual;
};

/// The shifted operator A - sigma I could not be factorized (shift too close
/// to an eigenvalue).
class ShiftFactorizationFailure : public Error {
 public:
  using Error::Error;
};

/// A decay-length fit was requested for a state without an exponential tail.
class UnboundState : public Error {
 public:
  using Error::Error;
};

/// The exponential tail is contaminated by the outer Dirichlet cut; the
/// truncation box is too small for the requested fit.
class TruncationDominated : public Error {
 public:
  using Error::Error;
};

/// Nonlinear fit whose parameter covariance exploded or whose normal
/// equations are singular; the caller should supply more data.
class IllConditionedFit : public Error {
 public:
  using Error::Error;
};

/// Critical-ratio search on records that never approach the threshold.
class NoTransition : public Error {
 public:
  using Error::Error;
};

/// A cache key maps to an existing entry with a different payload.
class CacheIntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace crossbound
