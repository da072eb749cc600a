#include "inexact/errors.hpp"

namespace inexact {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kMaxInnerIterations: return "MaxInnerIterations";
    case ErrorCode::kUnboundedSubproblem: return "UnboundedSubproblem";
    case ErrorCode::kUnsupportedSet: return "UnsupportedSet";
    case ErrorCode::kInnerSolveFailed: return "InnerSolveFailed";
    case ErrorCode::kLineSearchStalled: return "LineSearchStalled";
    case ErrorCode::kProxNotStronglyConvex: return "ProxNotStronglyConvex";
    case ErrorCode::kErrorBudgetViolated: return "ErrorBudgetViolated";
    case ErrorCode::kIterationBudgetExceeded: return "IterationBudgetExceeded";
    case ErrorCode::kOmegaMissing: return "OmegaMissing";
    case ErrorCode::kGapNotComputable: return "GapNotComputable";
    case ErrorCode::kGroundTruthRequired: return "GroundTruthRequired";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kUnknownProblem: return "UnknownProblem";
    case ErrorCode::kUnknownSolver: return "UnknownSolver";
    case ErrorCode::kOutputUnwritable: return "OutputUnwritable";
  }
  return "Unknown";
}

SolverError::SolverError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw SolverError(code, what); }

}  // namespace inexact
