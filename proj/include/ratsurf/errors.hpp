#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ratsurf {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Overflow,
  UnboundedSearch,
  NonIntegralReflection,
  NonIntegralMap,
  BudgetExceeded,
  UnrecognizedDiagram,
  OrbitNotCommuting,
  SingularCurve,
  SignPropagationConflict,
  ConstraintViolated,
  NoRootFound,
  UnknownSuite,
  InvalidConfig,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::UnboundedSearch: return "unbounded-search";
    case ErrorCode::NonIntegralReflection: return "non-integral-reflection";
    case ErrorCode::NonIntegralMap: return "non-integral-map";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::UnrecognizedDiagram: return "unrecognized-diagram";
    case ErrorCode::OrbitNotCommuting: return "orbit-not-commuting";
    case ErrorCode::SingularCurve: return "singular-curve";
    case ErrorCode::SignPropagationConflict: return "sign-propagation-conflict";
    case ErrorCode::ConstraintViolated: return "constraint-violated";
    case ErrorCode::NoRootFound: return "no-root-found";
    case ErrorCode::UnknownSuite: return "unknown-suite";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// All library failures are reported through this type; `code()` is stable,
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ratsurf
