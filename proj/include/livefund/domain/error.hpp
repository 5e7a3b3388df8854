#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace livefund {

/// Failure classes raised across the engine. Each maps to one documented
/// CLI exit code (see app/commands.hpp).
enum class ErrorKind {
  InvalidArgument,
  UnrecognizedDirection,
  UnrecognizedAction,
  UnrecognizedAnalyst,
  ProviderUnavailable,
  UnknownTicker,
  LeakageViolation,
  NoPriceAvailable,
  UnknownProviderKind,
  MissingCredential,
  InsufficientHistory,
  ZeroAverageVolume,
  LlmUnavailable,
  PayloadMismatch,
  MalformedSignalResponse,
  MalformedDecisionResponse,
  MalformedPlannerResponse,
  InfeasibleExecution,
  UnknownRun,
  StorageFailure,
  CorruptLedger,
  MissingPrice,
  EmptyRun,
  ZeroVariance,
  InsufficientData,
  ZeroMarketVariance,
  MisalignedSeries,
  MissingNextPrice,
  ConfigError,
  FixtureError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace livefund
