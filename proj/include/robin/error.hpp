#pragma once

#include <stdexcept>
#include <string>

namespace robin {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation is undefined on some point of its input enclosure
/// (division by an interval containing 0, log of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the range where a bound applies.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A lookup past the end of a prime table.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A request exceeds the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Two enclosures could not be separated at the maximum working precision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// An exponent vector without the non-increasing primorial structure.
class StructureError : public Error {
 public:
  using Error::Error;
};

}  // namespace robin
