#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "livefund/domain/date.hpp"
#include "livefund/domain/error.hpp"
#include "livefund/market/http_client.hpp"

namespace livefund::app {

/// Process exit codes. Stable across releases.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kUsage = 2;  // bad flags or config
inline constexpr int kLeakage = 3;
inline constexpr int kCorruptLedger = 4;
inline constexpr int kUnknownRun = 5;
inline constexpr int kMissingCredential = 6;
inline constexpr int kDataError = 7;  // fixtures, unknown tickers, missing prices
inline constexpr int kProviderUnavailable = 8;
inline constexpr int kEmptyRun = 9;
inline constexpr int kFixturesInvalid = 10;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Hooks for tests; defaults talk to the real network and clock.
struct CliContext {
  std::shared_ptr<net::HttpTransport> transport;
  std::function<Date()> today = &Date::today_utc;
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::string> mode;
  std::optional<std::string> run_id;
  std::optional<std::filesystem::path> fixtures;
  std::optional<std::filesystem::path> out;
  bool resume = false;
};

struct MetricsOptions {
  std::vector<std::string> run_ids;
  std::optional<std::filesystem::path> ledger;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> benchmark;
  std::optional<std::filesystem::path> out;
  bool no_timestamp = false;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err, const CliContext& ctx = {});
int cmd_metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const MetricsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate_fixtures(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

/// Full command line without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliContext& ctx = {});

}  // namespace livefund::app
