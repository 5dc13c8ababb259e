#pragma once

#include <stdexcept>
#include <string>

namespace sumlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL string, JSON document or flag value.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on arguments was violated (bad permutation, wrong system
/// variant, k out of range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A query reached outside the finite window on which data is known.
class WindowOverflow : public Error {
 public:
  using Error::Error;
};

/// A configured search space or support size limit would be exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace sumlab
