#pragma once

#include <stdexcept>
#include <string>

namespace momtail {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad measure description, violated precondition, parse error.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An exact computation would exceed the configured bit budget.
class PrecisionExceeded : public Error {
 public:
  using Error::Error;
};

/// A construction's search hit its cap or a post-hoc check failed.
class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

/// Problem larger than a configured size bound (games, FIP witness search).
class SizeBoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace momtail
