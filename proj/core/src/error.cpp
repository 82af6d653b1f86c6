#include "rmtsense/error.hpp"

namespace rmtsense {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidData: return "invalid-data";
    case ErrorCode::NumericalFailure: return "numerical-failure";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DegenerateRow: return "degenerate-row";
    case ErrorCode::UnsupportedClosedForm: return "unsupported-closed-form";
    case ErrorCode::UnsupportedConvention: return "unsupported-convention";
    case ErrorCode::UnstableFilter: return "unstable-filter";
    case ErrorCode::InvalidStream: return "invalid-stream";
    case ErrorCode::UndefinedRatio: return "undefined-ratio";
    case ErrorCode::Format: return "format";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace rmtsense
