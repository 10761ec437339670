#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainflow {

enum class ErrorCode {
  kParse,
  kInvariantViolation,
  kEnumerationTooLarge,
  kSearchSpaceTooLarge,
  kInvalidParameter,
  kMismatchedInstance,
  kIo,
};

/// Stable, CLI-facing name of an error code (e.g. "search-space-too-large").
std::string_view ErrorCodeName(ErrorCode code);

/// The one exception type thrown by the library. `field()` names the offending
/// input location (a JSON path such as "nodes[2].capacity") when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {});

  ErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace chainflow
