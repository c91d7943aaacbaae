#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jspec {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  SingularMatrix,
  GeneratorCountMismatch,
  CapacityExceeded,
  NotCommuting,
  NotNormal,
  NotDiagonalizable,
  DiagonalizationFailed,
  KindMismatch,
  NotDoublyStochastic,
  MatchingNotFound,
  ZeroEigenvalue,
  NotOrdered,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for failures of a bound hypothesis (commutation, normality,
  // nonsingularity, diagonalizability).
  bool is_hypothesis_failure() const noexcept {
    switch (code_) {
      case ErrorCode::SingularMatrix:
      case ErrorCode::NotCommuting:
      case ErrorCode::NotNormal:
      case ErrorCode::NotDiagonalizable:
      case ErrorCode::DiagonalizationFailed:
      case ErrorCode::ZeroEigenvalue:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace jspec
