#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace squeezebeam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: parameters, configuration documents, preconditions.
/// Carries one entry per offending field when several are detected at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(message), issues_{message} {}
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

/// The condensate wave function does not decay inside the grid.
class GridTooNarrowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Non-finite values or a failed numerical guard during integration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Truncated Fock-space computation lost more than the allowed tail weight.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Normalized variances need a nonzero mean photon number.
class UndefinedForVacuumError : public Error {
 public:
  using Error::Error;
};

}  // namespace squeezebeam
