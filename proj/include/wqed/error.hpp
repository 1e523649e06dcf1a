#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: a violated precondition or physical invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: divergence, norm drift, out-of-range history access.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace wqed
