#include "voipstat/error.hpp"

namespace voipstat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::NotSip: return "NotSip";
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::TooFewPackets: return "TooFewPackets";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace voipstat
