#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voipstat {

enum class ErrorCode {
  BadMagic,
  Truncated,
  TooShort,
  BadVersion,
  Malformed,
  NotSip,
  MissingHeader,
  TooFewPackets,
  DomainError,
  EmptyData,
  TooFewPoints,
  DegenerateData,
  NotConverged,
  LengthMismatch,
  ZeroVariance,
  BadK,
  BadSpec,
  BadInput,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Typed failure raised by every parser, estimator and command in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace voipstat
