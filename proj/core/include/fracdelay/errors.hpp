#pragma once

#include <stdexcept>
#include <string>

namespace fracdelay {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid value was requested outside the range a series covers.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent shapes, out-of-domain parameters, malformed inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: the caller's input is valid but no trustworthy value
/// could be produced.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Series did not meet the truncation criterion within the policy budget.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Rounding bound of the series exceeds the tolerance even at the
/// extended-precision tier.
class PrecisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// I - M is singular, so the defining equation cannot be solved for z(k).
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CommutativityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Parameters do not fit any of the known reduction patterns.
class PatternError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace fracdelay
