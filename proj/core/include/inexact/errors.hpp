#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inexact {

enum class ErrorCode {
  kInvalidArgument,
  kDomainError,
  kMaxInnerIterations,
  kUnboundedSubproblem,
  kUnsupportedSet,
  kInnerSolveFailed,
  kLineSearchStalled,
  kProxNotStronglyConvex,
  kErrorBudgetViolated,
  kIterationBudgetExceeded,
  kOmegaMissing,
  kGapNotComputable,
  kGroundTruthRequired,
  kSingularDesign,
  kUnknownProblem,
  kUnknownSolver,
  kOutputUnwritable,
};

std::string_view to_string(ErrorCode code);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace inexact
