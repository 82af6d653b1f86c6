#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmtsense {

/// Failure categories shared by every module.
enum class ErrorCode {
  InvalidArgument,
  InvalidData,
  NumericalFailure,
  Domain,
  DegenerateRow,
  UnsupportedClosedForm,
  UnsupportedConvention,
  UnstableFilter,
  InvalidStream,
  UndefinedRatio,
  Format,
  Dimension,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library. The code identifies the
/// failure category; the message carries the diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace rmtsense
