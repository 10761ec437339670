#include "chainflow/error.hpp"

namespace chainflow {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kInvariantViolation:
      return "invariant-violation";
    case ErrorCode::kEnumerationTooLarge:
      return "enumeration-too-large";
    case ErrorCode::kSearchSpaceTooLarge:
      return "search-space-too-large";
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kMismatchedInstance:
      return "mismatched-instance";
    case ErrorCode::kIo:
      return "io-error";
  }
  return "unknown-error";
}

namespace {

std::string Compose(ErrorCode code, const std::string& message,
                    const std::string& field) {
  std::string out(ErrorCodeName(code));
  if (!field.empty()) out += " at " + field;
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string field)
    : std::runtime_error(Compose(code, message, field)),
      code_(code),
      field_(std::move(field)) {}

}  // namespace chainflow
