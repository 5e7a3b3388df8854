#include "livefund/domain/error.hpp"

namespace livefund {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnrecognizedDirection: return "UnrecognizedDirection";
    case ErrorKind::UnrecognizedAction: return "UnrecognizedAction";
    case ErrorKind::UnrecognizedAnalyst: return "UnrecognizedAnalyst";
    case ErrorKind::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorKind::UnknownTicker: return "UnknownTicker";
    case ErrorKind::LeakageViolation: return "LeakageViolation";
    case ErrorKind::NoPriceAvailable: return "NoPriceAvailable";
    case ErrorKind::UnknownProviderKind: return "UnknownProviderKind";
    case ErrorKind::MissingCredential: return "MissingCredential";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::ZeroAverageVolume: return "ZeroAverageVolume";
    case ErrorKind::LlmUnavailable: return "LlmUnavailable";
    case ErrorKind::PayloadMismatch: return "PayloadMismatch";
    case ErrorKind::MalformedSignalResponse: return "MalformedSignalResponse";
    case ErrorKind::MalformedDecisionResponse: return "MalformedDecisionResponse";
    case ErrorKind::MalformedPlannerResponse: return "MalformedPlannerResponse";
    case ErrorKind::InfeasibleExecution: return "InfeasibleExecution";
    case ErrorKind::UnknownRun: return "UnknownRun";
    case ErrorKind::StorageFailure: return "StorageFailure";
    case ErrorKind::CorruptLedger: return "CorruptLedger";
    case ErrorKind::MissingPrice: return "MissingPrice";
    case ErrorKind::EmptyRun: return "EmptyRun";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ZeroMarketVariance: return "ZeroMarketVariance";
    case ErrorKind::MisalignedSeries: return "MisalignedSeries";
    case ErrorKind::MissingNextPrice: return "MissingNextPrice";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::FixtureError: return "FixtureError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace livefund
