#pragma once

#include <stdexcept>
#include <string>

namespace sfmkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: out-of-range vertex, invalid matching, cyclic input where a DAG is required.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Pattern or system dimensions that do not fit together.
class DimensionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An exhaustive routine was asked to enumerate more than its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised when a documented guarantee of a construction is violated at runtime.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sfmkit
