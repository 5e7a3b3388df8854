#include "livefund/ledger/ledger.hpp"

#include <fcntl.h>
#include <spdlog/spdlog.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "livefund/domain/error.hpp"

namespace livefund::ledger {

namespace fs = std::filesystem;

std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Signal: return "signal";
    case EntryKind::Decision: return "decision";
    case EntryKind::Trade: return "trade";
    case EntryKind::Snapshot: return "snapshot";
  }
  return "signal";
}

bool is_valid_run_id(std::string_view run_id) {
  if (run_id.empty() || run_id.size() > 128 || run_id == "." || run_id == ".." || run_id == "registry") return false;
  return std::all_of(run_id.begin(), run_id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

namespace {

constexpr std::string_view kCrcKey = ",\"crc32\":\"";
// ,"crc32":"xxxxxxxx"}
constexpr std::size_t kCrcTail = kCrcKey.size() + 8 + 2;

std::string crc_hex(std::string_view text) {
  const uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc & 0xffffffffUL));
  return buf;
}

Json payload_json(const EntryPayload& payload) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PortfolioSnapshot>) {
          Json j;
          j["portfolio"] = p.portfolio;
          j["total_value"] = p.total_value;
          return j;
        } else {
          return Json(p);
        }
      },
      payload);
}

EntryPayload payload_from(std::string_view kind, const Json& data) {
  if (kind == "signal") return data.get<Signal>();
  if (kind == "decision") return data.get<Decision>();
  if (kind == "trade") return data.get<TradeRecord>();
  if (kind == "snapshot") {
    return PortfolioSnapshot{data.at("portfolio").get<Portfolio>(), data.at("total_value").get<Money>()};
  }
  raise(ErrorKind::CorruptLedger, "unknown entry kind '" + std::string(kind) + "'");
}

void write_all(int fd, const std::string& text, const fs::path& file) {
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t n = ::write(fd, text.data() + done, text.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(ErrorKind::StorageFailure, "write failed for " + file.string());
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

std::string encode_line(const LedgerEntry& entry) {
  Json j;
  j["seq"] = entry.sequence_no;
  j["run_id"] = entry.run_id;
  j["date"] = entry.date;
  j["kind"] = to_string(entry.kind());
  j["data"] = payload_json(entry.payload);
  std::string body = j.dump();
  const std::string crc = crc_hex(body);
  body.pop_back();  // closing brace
  body += kCrcKey;
  body += crc;
  body += "\"}\n";
  return body;
}

LedgerEntry decode_line(std::string_view line) {
  if (line.size() <= kCrcTail || line.substr(line.size() - kCrcTail, kCrcKey.size()) != kCrcKey ||
      line.back() != '}') {
    raise(ErrorKind::CorruptLedger, "line has no checksum");
  }
  std::string body(line.substr(0, line.size() - kCrcTail));
  body += '}';
  const std::string_view stored = line.substr(line.size() - 10, 8);
  if (crc_hex(body) != stored) raise(ErrorKind::CorruptLedger, "checksum mismatch");
  try {
    const Json j = Json::parse(body);
    LedgerEntry e;
    e.sequence_no = j.at("seq").get<std::uint64_t>();
    e.run_id = j.at("run_id").get<std::string>();
    e.date = j.at("date").get<Date>();
    e.payload = payload_from(j.at("kind").get<std::string>(), j.at("data"));
    return e;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptLedger) throw;
    raise(ErrorKind::CorruptLedger, e.what());
  } catch (const std::exception& e) {
    raise(ErrorKind::CorruptLedger, e.what());
  }
}

Ledger::Ledger(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "runs", ec);
  if (ec) raise(ErrorKind::StorageFailure, "cannot create " + (root_ / "runs").string() + ": " + ec.message());
}

fs::path Ledger::run_file(const std::string& run_id) const { return root_ / "runs" / (run_id + ".jsonl"); }

Json Ledger::load_registry() const {
  const fs::path file = root_ / "runs" / "registry.json";
  std::ifstream in(file);
  if (!in) return Json{{"runs", Json::object()}};
  try {
    Json j = Json::parse(in);
    if (!j.contains("runs") || !j["runs"].is_object()) raise(ErrorKind::CorruptLedger, "registry has no runs map");
    return j;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorKind::CorruptLedger, file.string() + ": " + e.what());
  }
}

void Ledger::save_registry(const Json& registry) const {
  // Keys sorted so the file bytes do not depend on registration order.
  Json sorted{{"runs", Json::object()}};
  std::map<std::string, Json> runs;
  for (const auto& [id, meta] : registry["runs"].items()) runs.emplace(id, meta);
  for (const auto& [id, meta] : runs) sorted["runs"][id] = meta;

  const fs::path file = root_ / "runs" / "registry.json";
  const fs::path tmp = root_ / "runs" / "registry.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << sorted.dump(2) << "\n";
    if (!out) raise(ErrorKind::StorageFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) raise(ErrorKind::StorageFailure, "cannot replace " + file.string() + ": " + ec.message());
}

void Ledger::register_run(const std::string& run_id, const Json& meta) {
  if (!is_valid_run_id(run_id)) raise(ErrorKind::InvalidArgument, "invalid run id '" + run_id + "'");
  std::lock_guard lock(mutex_);
  Json registry = load_registry();
  registry["runs"][run_id] = meta;
  save_registry(registry);
  const fs::path file = run_file(run_id);
  if (!fs::exists(file)) {
    std::ofstream touch(file, std::ios::app);
    if (!touch) raise(ErrorKind::StorageFailure, "cannot create " + file.string());
  }
}

bool Ledger::has_run(const std::string& run_id) const {
  if (!is_valid_run_id(run_id)) return false;
  std::lock_guard lock(mutex_);
  return load_registry()["runs"].contains(run_id);
}

std::vector<std::string> Ledger::runs() const {
  std::lock_guard lock(mutex_);
  const Json registry = load_registry();
  std::vector<std::string> out;
  for (const auto& [id, meta] : registry["runs"].items()) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

Json Ledger::run_meta(const std::string& run_id) const {
  std::lock_guard lock(mutex_);
  const Json registry = load_registry();
  if (!registry["runs"].contains(run_id)) raise(ErrorKind::UnknownRun, "no run named '" + run_id + "'");
  return registry["runs"][run_id];
}

std::uint64_t Ledger::next_sequence(const std::string& run_id) {
  auto it = last_seq_.find(run_id);
  if (it == last_seq_.end()) {
    if (!load_registry()["runs"].contains(run_id)) raise(ErrorKind::UnknownRun, "no run named '" + run_id + "'");
    const auto existing = load_run(run_id);
    it = last_seq_.emplace(run_id, existing.empty() ? 0 : existing.back().sequence_no).first;
  }
  return it->second + 1;
}

std::uint64_t Ledger::append(const std::string& run_id, Date date, EntryPayload payload) {
  return append_batch(run_id, {{date, std::move(payload)}});
}

std::uint64_t Ledger::append_batch(const std::string& run_id,
                                   const std::vector<std::pair<Date, EntryPayload>>& items) {
  std::lock_guard lock(mutex_);
  const std::uint64_t first = next_sequence(run_id);
  if (items.empty()) return first;
  std::string text;
  std::uint64_t seq = first;
  for (const auto& [date, payload] : items) {
    text += encode_line(LedgerEntry{seq++, run_id, date, payload});
  }
  const fs::path file = run_file(run_id);
  const int fd = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) raise(ErrorKind::StorageFailure, "cannot open " + file.string());
  try {
    write_all(fd, text, file);
  } catch (...) {
    ::close(fd);
    throw;
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) raise(ErrorKind::StorageFailure, "fsync failed for " + file.string());
  last_seq_[run_id] = seq - 1;
  return first;
}

std::vector<LedgerEntry> Ledger::load_run(const std::string& run_id) const {
  if (!is_valid_run_id(run_id)) raise(ErrorKind::UnknownRun, "invalid run id '" + run_id + "'");
  const fs::path file = run_file(run_id);
  std::ifstream in(file, std::ios::binary);
  if (!in) raise(ErrorKind::UnknownRun, "no ledger for run '" + run_id + "' under " + (root_ / "runs").string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<LedgerEntry> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      raise(ErrorKind::CorruptLedger, file.string() + ":" + std::to_string(line_no) + ": truncated line");
    }
    try {
      LedgerEntry e = decode_line(std::string_view(text).substr(pos, nl - pos));
      const std::uint64_t expected = out.empty() ? 1 : out.back().sequence_no + 1;
      if (e.sequence_no != expected || e.run_id != run_id) {
        raise(ErrorKind::CorruptLedger, "unexpected sequence number or run id");
      }
      out.push_back(std::move(e));
    } catch (const Error& e) {
      raise(ErrorKind::CorruptLedger, file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    pos = nl + 1;
  }
  return out;
}

std::vector<std::pair<Date, PortfolioSnapshot>> snapshots_by_date(const std::vector<LedgerEntry>& entries) {
  std::map<Date, PortfolioSnapshot> by_date;
  for (const auto& e : entries) {
    if (const auto* s = std::get_if<PortfolioSnapshot>(&e.payload)) {
      if (by_date.count(e.date)) {
        spdlog::warn("run {} has more than one snapshot for {}; keeping the later one", e.run_id, e.date.iso());
      }
      by_date[e.date] = *s;
    }
  }
  return {by_date.begin(), by_date.end()};
}

std::vector<ValuePoint> Ledger::daily_value_series(const std::string& run_id) const {
  const auto snaps = snapshots_by_date(load_run(run_id));
  if (snaps.empty()) raise(ErrorKind::EmptyRun, "run '" + run_id + "' has no portfolio snapshots");
  std::vector<ValuePoint> out;
  out.reserve(snaps.size());
  for (const auto& [date, snap] : snaps) out.push_back({date, snap.total_value});
  return out;
}

Money portfolio_value(const Portfolio& portfolio, const PriceMap& prices) {
  Money total = portfolio.cash;
  for (const auto& [ticker, pos] : portfolio.positions) {
    if (pos.shares == 0) continue;
    const auto it = prices.find(ticker);
    if (it == prices.end()) raise(ErrorKind::MissingPrice, "no price for held ticker " + ticker.str());
    total += notional(pos.shares, it->second);
  }
  return total;
}

}  // namespace livefund::ledger
