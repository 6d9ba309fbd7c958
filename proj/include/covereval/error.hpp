#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covereval {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, unknown labels, violated preconditions.
/// The command-line tool maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A computation that could not produce a value for valid input.
/// The command-line tool maps these to exit code 2.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Raised by the numeric maximum-likelihood search when it runs out of
/// iterations. Carries the parameters of the last iterate.
class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : ComputationError(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace covereval
