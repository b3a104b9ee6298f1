#pragma once

#include <stdexcept>
#include <string>

namespace lolog {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed specs, out-of-range ids, missing attributes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (singular system,
/// indefinite weight matrix, non-finite values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lolog
