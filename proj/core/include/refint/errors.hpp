#pragma once

#include <stdexcept>
#include <string>

namespace refint {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (too few values, NaN input,
// out-of-range parameter, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A value falls outside the mathematical domain of a transform.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input could not be read or does not match the expected layout.
class InputError : public Error {
 public:
  using Error::Error;
};

// Numerical procedure could not produce a finite answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace refint
