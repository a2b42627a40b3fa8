#pragma once

#include <stdexcept>
#include <string>

namespace ghostsim {

enum class ErrorCode {
  InvalidArgument,
  NumericDomain,
  Truncation,
  NormalizationViolation,
  UndefinedContrast,
  Parse,
  Config,
  Io,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A kernel or integrand produced NaN/Inf. Carries the offending coordinates.
class NumericDomainError : public Error {
 public:
  NumericDomainError(const std::string& what, double x, double xp)
      : Error(ErrorCode::NumericDomain, what), x_(x), xp_(xp) {}
  double x() const noexcept { return x_; }
  double xp() const noexcept { return xp_; }

 private:
  double x_;
  double xp_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace ghostsim
