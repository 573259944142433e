#include "cforge/errors.hpp"

namespace cforge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateNeighbor: return "DuplicateNeighbor";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyOutSet: return "EmptyOutSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::TooLargeForEnumeration: return "TooLargeForEnumeration";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::NumericUnderflow: return "NumericUnderflow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace cforge
