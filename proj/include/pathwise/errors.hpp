#pragma once

#include <stdexcept>
#include <string>

namespace pathwise {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: config keys, CFL violations, mesh mismatches, grids that
/// cannot hold the requested objects.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

/// A field carried NaN or infinity.
class InvalidFieldError : public Error {
public:
  using Error::Error;
};

/// The drift returned a non-finite vector.
class DriftEvaluationError : public Error {
public:
  using Error::Error;
};

/// Blow-up during time marching or characteristic integration.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Time or index outside the admissible range.
class RangeError : public Error {
public:
  using Error::Error;
};

}  // namespace pathwise
