#include "relanosov/error.hpp"

namespace relanosov {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnsupportedPresentation: return "UnsupportedPresentation";
    case ErrorCode::EmptyPeripheral: return "EmptyPeripheral";
    case ErrorCode::InconsistentTable: return "InconsistentTable";
    case ErrorCode::DomainExceeded: return "DomainExceeded";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::EnvelopeBounded: return "EnvelopeBounded";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NoGap: return "NoGap";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::BadTime: return "BadTime";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InsufficientLabels: return "InsufficientLabels";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::FreenessCheckFailed: return "FreenessCheckFailed";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotBlockStructured: return "NotBlockStructured";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace relanosov
