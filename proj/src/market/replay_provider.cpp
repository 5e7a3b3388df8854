#include "livefund/market/replay_provider.hpp"

#include <algorithm>
#include <fstream>

#include "livefund/domain/error.hpp"

namespace livefund::market {

namespace fs = std::filesystem;

template <typename Record>
std::vector<Record> load_jsonl(const fs::path& file) {
  std::vector<Record> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Record r = Json::parse(line).get<Record>();
      validate(r);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      raise(ErrorKind::FixtureError, file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

template std::vector<OhlcvBar> load_jsonl<OhlcvBar>(const fs::path&);
template std::vector<NewsItem> load_jsonl<NewsItem>(const fs::path&);
template std::vector<InsiderTransaction> load_jsonl<InsiderTransaction>(const fs::path&);
template std::vector<FundamentalsSnapshot> load_jsonl<FundamentalsSnapshot>(const fs::path&);
template std::vector<MacroIndicator> load_jsonl<MacroIndicator>(const fs::path&);

FixtureManifest FixtureManifest::load(const fs::path& fixture_dir) {
  const fs::path file = fixture_dir / "manifest.json";
  std::ifstream in(file);
  if (!in) raise(ErrorKind::FixtureError, "missing fixture manifest " + file.string());
  try {
    const Json j = Json::parse(in);
    FixtureManifest m;
    m.tickers = j.at("tickers").get<std::vector<Ticker>>();
    m.start = j.at("start").get<Date>();
    m.end = j.at("end").get<Date>();
    if (j.contains("benchmark") && !j.at("benchmark").is_null()) {
      m.benchmark = j.at("benchmark").get<Ticker>();
    }
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorKind::FixtureError, file.string() + ": " + e.what());
  }
}

struct ReplayProvider::Streams {
  std::map<Ticker, std::vector<OhlcvBar>> ohlcv;
  std::map<Ticker, std::vector<NewsItem>> news;
  std::map<Ticker, std::vector<InsiderTransaction>> insider;
  std::map<Ticker, std::vector<FundamentalsSnapshot>> fundamentals;
  std::optional<std::vector<NewsItem>> policy;
  std::optional<std::vector<MacroIndicator>> macro;
};

namespace {

// Records entries are never mutated after insertion, so references stay
// valid after the lock is released.
template <typename Record>
const std::vector<Record>& stream_for(std::mutex& mutex, std::map<Ticker, std::vector<Record>>& cache,
                                      const Ticker& ticker, const fs::path& file) {
  std::lock_guard lock(mutex);
  auto it = cache.find(ticker);
  if (it == cache.end()) it = cache.emplace(ticker, load_jsonl<Record>(file)).first;
  return it->second;
}

template <typename Record>
const std::vector<Record>& stream_for(std::mutex& mutex, std::optional<std::vector<Record>>& cache,
                                      const fs::path& file) {
  std::lock_guard lock(mutex);
  if (!cache) cache = load_jsonl<Record>(file);
  return *cache;
}

/// Newest `limit` records of the delivered prefix, in stream order.
template <typename Record>
std::vector<Record> delivered_tail(const std::vector<Record>& stream, Date as_of, std::size_t limit) {
  std::size_t end = stream.size();
  while (end > 0 && record_date(stream[end - 1]) > as_of) --end;
  const std::size_t begin = end > limit ? end - limit : 0;
  return {stream.begin() + static_cast<std::ptrdiff_t>(begin),
          stream.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace

ReplayProvider::ReplayProvider(fs::path fixture_dir)
    : dir_(std::move(fixture_dir)),
      manifest_(FixtureManifest::load(dir_)),
      streams_(std::make_unique<Streams>()) {
  known_.insert(manifest_.tickers.begin(), manifest_.tickers.end());
  if (manifest_.benchmark) known_.insert(*manifest_.benchmark);
}

ReplayProvider::~ReplayProvider() = default;

bool ReplayProvider::knows(const Ticker& ticker) const { return known_.count(ticker) > 0; }

void ReplayProvider::require_known(const Ticker& ticker) const {
  if (!knows(ticker)) {
    raise(ErrorKind::UnknownTicker, "ticker " + ticker.str() + " is not in fixture manifest " +
                                        (dir_ / "manifest.json").string());
  }
}

std::vector<OhlcvBar> ReplayProvider::ohlcv(const Ticker& ticker, Date as_of,
                                            std::size_t limit) const {
  require_known(ticker);
  const auto& s = stream_for(mutex_, streams_->ohlcv, ticker, dir_ / ticker.str() / "ohlcv.jsonl");
  return delivered_tail(s, as_of, limit);
}

std::vector<NewsItem> ReplayProvider::company_news(const Ticker& ticker, Date as_of,
                                                   std::size_t limit) const {
  require_known(ticker);
  const auto& s = stream_for(mutex_, streams_->news, ticker, dir_ / ticker.str() / "news.jsonl");
  return delivered_tail(s, as_of, limit);
}

std::vector<NewsItem> ReplayProvider::policy_news(Date as_of, std::size_t limit) const {
  const auto& s = stream_for(mutex_, streams_->policy, dir_ / "_policy" / "news.jsonl");
  return delivered_tail(s, as_of, limit);
}

std::vector<InsiderTransaction> ReplayProvider::insider(const Ticker& ticker, Date as_of,
                                                        std::size_t limit) const {
  require_known(ticker);
  const auto& s =
      stream_for(mutex_, streams_->insider, ticker, dir_ / ticker.str() / "insider.jsonl");
  return delivered_tail(s, as_of, limit);
}

std::vector<FundamentalsSnapshot> ReplayProvider::fundamentals(const Ticker& ticker,
                                                               Date as_of) const {
  require_known(ticker);
  const auto& s =
      stream_for(mutex_, streams_->fundamentals, ticker, dir_ / ticker.str() / "fundamentals.jsonl");
  return delivered_tail(s, as_of, s.size());
}

std::vector<MacroIndicator> ReplayProvider::macro(Date as_of, std::size_t limit) const {
  const auto& s = stream_for(mutex_, streams_->macro, dir_ / "_macro" / "indicators.jsonl");
  return delivered_tail(s, as_of, limit);
}

std::vector<Date> ReplayProvider::trading_days(const std::vector<Ticker>& tickers, Date from,
                                               Date to) const {
  std::set<Date> days;
  for (const auto& t : tickers) {
    require_known(t);
    const auto& s = stream_for(mutex_, streams_->ohlcv, t, dir_ / t.str() / "ohlcv.jsonl");
    for (const auto& bar : s) {
      if (bar.date >= from && bar.date <= to) days.insert(bar.date);
    }
  }
  return {days.begin(), days.end()};
}

}  // namespace livefund::market
