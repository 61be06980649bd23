#pragma once

#include <stdexcept>
#include <string>

namespace palcanon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, malformed input files, invalid canonical-form specs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Exact zero pivot in LU.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Smallest LU pivot below the near-singularity threshold; eigenvalues refused.
class NearSingular : public Error {
 public:
  using Error::Error;
};

/// Iteration limit exceeded or a non-finite value produced.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class PairingFailure : public Error {
 public:
  using Error::Error;
};

class PredictionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace palcanon
