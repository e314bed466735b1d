#pragma once

#include <stdexcept>
#include <string>

namespace greenkernel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied malformed input (dimension mismatch, bad modulus, parse error).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Request falls outside what the engine models (e.g. non-abelian Sylow subgroup).
class ScopeError : public Error {
 public:
  using Error::Error;
};

/// A configured size budget would be exceeded.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t required)
      : Error(what + " (required budget " + std::to_string(required) + ")"),
        required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// An internal invariant failed. Never caused by valid input; signals a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace greenkernel
