#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "livefund/domain/serialization.hpp"
#include "livefund/domain/types.hpp"

namespace livefund::ledger {

struct PortfolioSnapshot {
  Portfolio portfolio;
  Money total_value;

  bool operator==(const PortfolioSnapshot&) const = default;
};

enum class EntryKind { Signal, Decision, Trade, Snapshot };
std::string_view to_string(EntryKind k);

using EntryPayload = std::variant<Signal, Decision, TradeRecord, PortfolioSnapshot>;

struct LedgerEntry {
  std::uint64_t sequence_no = 0;
  std::string run_id;
  Date date;
  EntryPayload payload;

  EntryKind kind() const { return static_cast<EntryKind>(payload.index()); }
  bool operator==(const LedgerEntry&) const = default;
};

struct ValuePoint {
  Date date;
  Money value;

  bool operator==(const ValuePoint&) const = default;
};

/// Run ids become file names: letters, digits, '.', '_' and '-' only.
bool is_valid_run_id(std::string_view run_id);

/// One JSONL line (with trailing newline) for an entry, checksum included.
std::string encode_line(const LedgerEntry& entry);
/// Inverse of encode_line for a line without its newline. Throws
/// CorruptLedger on checksum or parse failure.
LedgerEntry decode_line(std::string_view line);

/// Append-only store under `<root>/runs`: one `<run_id>.jsonl` per run and a
/// `registry.json` index. One writer per run; readers need no coordination.
class Ledger {
 public:
  explicit Ledger(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path run_file(const std::string& run_id) const;

  /// Creates the run if missing, otherwise replaces its metadata.
  void register_run(const std::string& run_id, const Json& meta = Json::object());
  bool has_run(const std::string& run_id) const;
  std::vector<std::string> runs() const;
  Json run_meta(const std::string& run_id) const;

  std::uint64_t append(const std::string& run_id, Date date, EntryPayload payload);
  /// Writes all entries with one flush; returns the first sequence number.
  std::uint64_t append_batch(const std::string& run_id, const std::vector<std::pair<Date, EntryPayload>>& items);

  std::vector<LedgerEntry> load_run(const std::string& run_id) const;

  /// One (date, total) per snapshot date, ascending. Throws EmptyRun.
  std::vector<ValuePoint> daily_value_series(const std::string& run_id) const;

 private:
  Json load_registry() const;
  void save_registry(const Json& registry) const;
  std::uint64_t next_sequence(const std::string& run_id);

  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::map<std::string, std::uint64_t> last_seq_;
};

/// cash + sum(shares * price). Throws MissingPrice for an unpriced holding.
Money portfolio_value(const Portfolio& portfolio, const PriceMap& prices);

/// Snapshot entries of a loaded run, last write per date, ascending.
std::vector<std::pair<Date, PortfolioSnapshot>> snapshots_by_date(const std::vector<LedgerEntry>& entries);

}  // namespace livefund::ledger
