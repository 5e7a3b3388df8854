#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "livefund/market/provider.hpp"

namespace livefund::market {

/// Fixture manifest (`manifest.json`).
struct FixtureManifest {
  std::vector<Ticker> tickers;
  Date start;
  Date end;
  std::optional<Ticker> benchmark;

  static FixtureManifest load(const std::filesystem::path& fixture_dir);
};

/// Deterministic provider over a fixture directory:
///
///   <dir>/manifest.json
///   <dir>/<TICKER>/{ohlcv,news,insider,fundamentals}.jsonl
///   <dir>/_policy/news.jsonl
///   <dir>/_macro/indicators.jsonl
///
/// Each file is replayed as an ingestion stream. At date D the stream has
/// delivered every line up to and including the last line stamped <= D, so a
/// mis-stamped record sitting earlier in the stream is delivered as-is and
/// left for the gateway's leakage guard to reject.
class ReplayProvider final : public MarketDataProvider {
 public:
  explicit ReplayProvider(std::filesystem::path fixture_dir);
  ~ReplayProvider() override;

  const FixtureManifest& manifest() const { return manifest_; }
  const std::filesystem::path& directory() const { return dir_; }

  bool knows(const Ticker& ticker) const override;
  std::vector<OhlcvBar> ohlcv(const Ticker& ticker, Date as_of, std::size_t limit) const override;
  std::vector<NewsItem> company_news(const Ticker& ticker, Date as_of,
                                     std::size_t limit) const override;
  std::vector<NewsItem> policy_news(Date as_of, std::size_t limit) const override;
  std::vector<InsiderTransaction> insider(const Ticker& ticker, Date as_of,
                                          std::size_t limit) const override;
  std::vector<FundamentalsSnapshot> fundamentals(const Ticker& ticker, Date as_of) const override;
  std::vector<MacroIndicator> macro(Date as_of, std::size_t limit) const override;
  std::vector<Date> trading_days(const std::vector<Ticker>& tickers, Date from,
                                 Date to) const override;

  struct Streams;

 private:
  void require_known(const Ticker& ticker) const;

  std::filesystem::path dir_;
  FixtureManifest manifest_;
  std::set<Ticker> known_;
  mutable std::mutex mutex_;
  std::unique_ptr<Streams> streams_;
};

/// Parses one JSON Lines fixture file. Blank lines are skipped; any parse
/// or invariant failure raises FixtureError naming file and line.
template <typename Record>
std::vector<Record> load_jsonl(const std::filesystem::path& file);

}  // namespace livefund::market
