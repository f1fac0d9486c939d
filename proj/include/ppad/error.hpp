#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ppad {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number when known (0 otherwise).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Argument dimensions disagree with the object they are applied to.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to run beyond its size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An instance violates a promise it must satisfy at construction.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// A path-following loop ran past its step budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t steps)
      : Error(what + " (steps taken: " + std::to_string(steps) + ")"), steps_(steps) {}
  std::uint64_t steps() const noexcept { return steps_; }

 private:
  std::uint64_t steps_;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppad
