#include "defeig/error.hpp"

namespace defeig {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kConvergence: return "convergence-failure";
    case ErrorKind::kSplitFailure: return "split-failure";
    case ErrorKind::kBreakdown: return "factorization-breakdown";
    case ErrorKind::kNumericalRank: return "numerical-rank";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
    case ErrorKind::kPrecondition:
      return 2;
    case ErrorKind::kConvergence:
    case ErrorKind::kSplitFailure:
    case ErrorKind::kBreakdown:
    case ErrorKind::kNumericalRank:
      return 3;
    case ErrorKind::kIo:
      return 4;
  }
  return 1;
}

}  // namespace defeig
