#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agentsafe {

enum class ErrorCode {
  BackendUnreachable,
  ReplayMiss,
  MalformedResponse,
  InvalidRequest,
  TaxonomyMiss,
  GenerationFailed,
  PlanParseError,
  WindowMismatch,
  ImageSearchUnreachable,
  ValidationError,
  UnknownAgent,
  UnknownZone,
  NoPath,
  SpecParseError,
  OutOfWindow,
  VerdictParseError,
  NotCoLocated,
  Busy,
  NotFound,
  AmbiguousRoot,
  ConfigError,
  ScenarioLoadError,
  CorruptCheckpoint,
  SchemaMismatch,
  EmptyLog,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::TaxonomyMiss: return "TaxonomyMiss";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::PlanParseError: return "PlanParseError";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::ImageSearchUnreachable: return "ImageSearchUnreachable";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::UnknownZone: return "UnknownZone";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::SpecParseError: return "SpecParseError";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::VerdictParseError: return "VerdictParseError";
    case ErrorCode::NotCoLocated: return "NotCoLocated";
    case ErrorCode::Busy: return "Busy";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AmbiguousRoot: return "AmbiguousRoot";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ScenarioLoadError: return "ScenarioLoadError";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace agentsafe
