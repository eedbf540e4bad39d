#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hookfit {

// Process exit codes used by the command-line tool. Every exception below
// maps onto exactly one of them.
enum class ExitCode : int {
  success = 0,
  usage = 1,
  io = 2,
  degenerate = 3,
  internal = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

/// Invalid distribution parameters or out-of-domain arguments.
class ParameterError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

/// Conflicting or malformed request, e.g. comparing fits with different x_min.
class UsageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

/// Evaluation outside the support of a distribution (x < x_min).
class SupportError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  ExitCode exit_code() const noexcept override { return ExitCode::io; }

 private:
  std::size_t line_;
};

/// No positive counts left after dropping zeros.
class EmptyDataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

/// Data that cannot support a fit: empty tail, a single distinct value,
/// or no admissible x_min candidate.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::degenerate; }
};

/// Truncation threshold above every observation.
class EmptyTailError : public DegenerateDataError {
 public:
  using DegenerateDataError::DegenerateDataError;
};

/// Results that contradict each other, e.g. a hooked fit worse than the
/// power law it nests. Signals an optimizer failure upstream.
class ConsistencyError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::internal; }
};

}  // namespace hookfit
