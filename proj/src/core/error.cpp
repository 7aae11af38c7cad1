#include "guikit/error.hpp"

namespace guikit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidActionKind: return "InvalidActionKind";
    case ErrorCode::InvalidCoordinates: return "InvalidCoordinates";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnknownActionType: return "UnknownActionType";
    case ErrorCode::MalformedPoint: return "MalformedPoint";
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::PlanHeadMismatch: return "PlanHeadMismatch";
    case ErrorCode::NoPlanSection: return "NoPlanSection";
    case ErrorCode::NoDecisionSection: return "NoDecisionSection";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyAggregate: return "EmptyAggregate";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::TooFewEpisodes: return "TooFewEpisodes";
    case ErrorCode::Dimension: return "DimensionError";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace guikit
