#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ihda {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `position` is a byte offset (cubes) or a line
/// number (model files), see `where()`.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Structurally invalid model or mismatched operands.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// State-space construction exceeded its configured limits.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Wire protocol violation between controller and plant.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace ihda
