#pragma once

#include <stdexcept>
#include <string>

namespace cusplab {

/// Base of every error raised by the library. The exit code is what the
/// command-line driver returns when the error reaches main().
class Error : public std::runtime_error {
public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

/// Bad arguments, inconsistent ranges, malformed configuration.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what, 1) {}
};

/// A coefficient table that does not reach far enough for the request.
class TableTooShort : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// Exact integer arithmetic left the representable range.
class OverflowError : public Error {
public:
  OverflowError(const std::string& what, long long first_bad_index)
      : Error(what, 1), index_(first_bad_index) {}
  long long index() const noexcept { return index_; }

private:
  long long index_;
};

/// A numerical routine refused to run because it would exceed its budget.
class BudgetExceeded : public Error {
public:
  explicit BudgetExceeded(const std::string& what) : Error(what, 2) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what, 3) {}
};

}  // namespace cusplab
