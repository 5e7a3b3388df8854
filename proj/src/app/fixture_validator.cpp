#include "livefund/app/fixture_validator.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "livefund/market/records.hpp"
#include "livefund/market/replay_provider.hpp"

namespace livefund::app {

namespace fs = std::filesystem;
using namespace livefund::market;

bool FixtureReport::ok() const {
  return std::all_of(files.begin(), files.end(), [](const FileVerdict& f) { return f.ok(); });
}

namespace {

enum class Order { NonDecreasing, Increasing };

/// Parses and checks one stream; `extra` adds record-specific checks.
template <typename Record, typename Extra>
FileVerdict check_stream(const fs::path& file, Order order, Extra&& extra) {
  FileVerdict v;
  v.file = file;
  std::ifstream in(file);
  if (!in) {
    v.problems.push_back("cannot open file");
    return v;
  }
  std::string line;
  std::size_t line_no = 0;
  std::optional<Date> previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string at = "line " + std::to_string(line_no) + ": ";
    Record r;
    try {
      r = Json::parse(line).get<Record>();
      validate(r);
    } catch (const std::exception& e) {
      v.problems.push_back(at + e.what());
      continue;
    }
    ++v.records;
    const Date d = record_date(r);
    if (previous) {
      if (d < *previous) {
        v.problems.push_back(at + "date " + d.iso() + " is before the previous record's " + previous->iso());
      } else if (order == Order::Increasing && d == *previous) {
        v.problems.push_back(at + "duplicate date " + d.iso());
      }
    }
    previous = d;
    if (auto msg = extra(r)) v.problems.push_back(at + *msg);
  }
  return v;
}

auto none = [](const auto&) -> std::optional<std::string> { return std::nullopt; };

}  // namespace

FixtureReport validate_fixtures(const fs::path& dir) {
  FixtureReport report;
  FileVerdict manifest_verdict;
  manifest_verdict.file = dir / "manifest.json";
  std::optional<FixtureManifest> manifest;
  try {
    manifest = FixtureManifest::load(dir);
    if (manifest->tickers.empty()) manifest_verdict.problems.push_back("manifest lists no tickers");
    if (manifest->start > manifest->end) manifest_verdict.problems.push_back("manifest start is after end");
  } catch (const std::exception& e) {
    manifest_verdict.problems.push_back(e.what());
  }
  report.files.push_back(manifest_verdict);
  if (!manifest) return report;

  std::vector<Ticker> tickers = manifest->tickers;
  if (manifest->benchmark) tickers.push_back(*manifest->benchmark);
  for (const auto& t : tickers) {
    const fs::path tdir = dir / t.str();
    const fs::path ohlcv = tdir / "ohlcv.jsonl";
    if (!fs::exists(ohlcv)) {
      FileVerdict missing;
      missing.file = ohlcv;
      missing.problems.push_back("missing OHLCV file for manifest ticker " + t.str());
      report.files.push_back(missing);
      continue;
    }
    std::optional<Date> first;
    std::optional<Date> last;
    FileVerdict bars = check_stream<OhlcvBar>(ohlcv, Order::Increasing, [&](const OhlcvBar& b) {
      if (!first) first = b.date;
      last = b.date;
      return std::optional<std::string>{};
    });
    if (!first || *first > manifest->start || *last < manifest->end) {
      bars.problems.push_back("bars do not cover the manifest period " + manifest->start.iso() + " to " +
                              manifest->end.iso());
    }
    report.files.push_back(std::move(bars));

    auto same_ticker = [&t](const auto& r) -> std::optional<std::string> {
      if (r.ticker != t) return "record belongs to another ticker";
      return std::nullopt;
    };
    if (fs::exists(tdir / "news.jsonl")) {
      report.files.push_back(check_stream<NewsItem>(tdir / "news.jsonl", Order::NonDecreasing,
                                                    [&t](const NewsItem& n) -> std::optional<std::string> {
                                                      if (n.scope != NewsScope::Company) return "policy item in a company news file";
                                                      if (n.ticker != t) return "record belongs to another ticker";
                                                      return std::nullopt;
                                                    }));
    }
    if (fs::exists(tdir / "insider.jsonl")) {
      report.files.push_back(check_stream<InsiderTransaction>(tdir / "insider.jsonl", Order::NonDecreasing, same_ticker));
    }
    if (fs::exists(tdir / "fundamentals.jsonl")) {
      report.files.push_back(
          check_stream<FundamentalsSnapshot>(tdir / "fundamentals.jsonl", Order::Increasing, same_ticker));
    }
  }
  if (fs::exists(dir / "_policy" / "news.jsonl")) {
    report.files.push_back(check_stream<NewsItem>(dir / "_policy" / "news.jsonl", Order::NonDecreasing,
                                                  [](const NewsItem& n) -> std::optional<std::string> {
                                                    if (n.scope != NewsScope::Policy) return "company item in the policy news file";
                                                    return std::nullopt;
                                                  }));
  }
  if (fs::exists(dir / "_macro" / "indicators.jsonl")) {
    report.files.push_back(check_stream<MacroIndicator>(dir / "_macro" / "indicators.jsonl", Order::NonDecreasing, none));
  }
  return report;
}

}  // namespace livefund::app
