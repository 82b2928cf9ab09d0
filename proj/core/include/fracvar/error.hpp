#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracvar {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad order, empty grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric function was evaluated outside its domain (pole, log of a
/// nonpositive number, non-finite result).
class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative procedure did not reach its tolerance within its budget.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two sampled objects live on different grids.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression; `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {})
      : Error(message), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& message, std::size_t offset, std::string name)
      : ParseError(message, offset), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

}  // namespace fracvar
