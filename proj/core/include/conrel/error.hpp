#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conrel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid user input: problem files, expressions, arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error. `position()` is the 0-based character offset.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A computation produced a non-finite value (division by zero, log of a
/// non-positive number, overflow, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace conrel
