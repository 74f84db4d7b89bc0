#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace ricperp {

enum class ErrorCode {
  InvalidArgument,
  SymmetryViolation,
  NonFinite,
  DimensionMismatch,
  SingularMetric,
  ZeroVector,
  NonUnitaryFrame,
  UnsupportedFamilyRank,
  OutOfTheoremRange,
  LambdaTooSmall,
  EmptyGrid,
  IndexOutOfRange,
  Parse,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by tensor validation; carries the worst residual and where it occurred.
class SymmetryViolation : public Error {
 public:
  SymmetryViolation(double residual, std::array<int, 4> where);

  double residual() const noexcept { return residual_; }
  const std::array<int, 4>& where() const noexcept { return where_; }

 private:
  double residual_;
  std::array<int, 4> where_;
};

}  // namespace ricperp
