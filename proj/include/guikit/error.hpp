#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace guikit {

enum class ErrorCode {
  InvalidArgument,
  InvalidActionKind,
  InvalidCoordinates,
  NotNormalized,
  MissingField,
  UnknownActionType,
  MalformedPoint,
  Syntax,
  PlanHeadMismatch,
  NoPlanSection,
  NoDecisionSection,
  LengthMismatch,
  EmptyAggregate,
  Schema,
  Io,
  TooFewEpisodes,
  Dimension,
  Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the toolkit is reported as an Error carrying a code the
/// C API can forward unchanged.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace guikit
