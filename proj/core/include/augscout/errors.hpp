#pragma once

#include <stdexcept>
#include <string>

namespace augscout {

enum class ErrorCode {
  DegenerateCrop,
  InvalidSpec,
  DatasetUnavailable,
  ChecksumMismatch,
  ClassTooSmall,
  PluginFailure,
  NonFiniteLoss,
  EmptyClass,
  AllRunsFailed,
  InvalidConfig,
  DivisionByZero,
  PartialCompletion,
  NoData,
  EmptyRange,
  EmptyCurve,
  TooFewPoints,
  NoClasses,
  GridMismatch,
  FixtureCorrupt,
  RenderFailure,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole toolkit; the code identifies the
/// contract that was violated and is what tests match on.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace augscout
