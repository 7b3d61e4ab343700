#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hydrate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (dimension, level count, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes or dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Integer accumulation would leave its representable range.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A call argument violates the operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The object is not in a state that permits the operation.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Input data is not usable (non-finite weights, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary or text file. Carries the byte offset of the fault.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace hydrate
