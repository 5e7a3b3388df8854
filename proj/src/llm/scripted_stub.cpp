#include "livefund/llm/scripted_stub.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "livefund/domain/error.hpp"
#include "livefund/domain/serialization.hpp"

namespace livefund::llm {

StubDefault parse_stub_default(std::string_view text) {
  if (text == "neutral") return StubDefault::Neutral;
  if (text == "follow") return StubDefault::Follow;
  raise(ErrorKind::ConfigError, "unknown stub default '" + std::string(text) + "' (expected neutral or follow)");
}

ScriptedStub::ScriptedStub(std::vector<ScriptEntry> script, StubOptions options) : options_(options) {
  for (auto& e : script) {
    if (e.fail_times < 0) raise(ErrorKind::InvalidArgument, "fail_times must be >= 0");
    by_role_[e.role].push_back(std::move(e));
  }
}

std::vector<ScriptEntry> ScriptedStub::load_script(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) raise(ErrorKind::ConfigError, "cannot open stub script " + file.string());
  std::vector<ScriptEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      ScriptEntry e;
      e.role = j.at("role").get<std::string>();
      if (j.contains("ticker") && !j["ticker"].is_null()) e.ticker = j["ticker"].get<Ticker>();
      if (j.contains("date") && !j["date"].is_null()) e.date = j["date"].get<Date>();
      if (j.contains("response") && !j["response"].is_null()) e.response = j["response"].get<std::string>();
      e.fail_times = j.value("fail_times", 0);
      if (!e.response && e.fail_times == 0) {
        // A bare entry without response fails forever.
        e.fail_times = -1;
      }
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      raise(ErrorKind::ConfigError, file.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

const ScriptEntry* ScriptedStub::lookup(const CallContext& context) const {
  const auto it = by_role_.find(context.role);
  if (it == by_role_.end()) return nullptr;
  const ScriptEntry* best = nullptr;
  int best_score = -1;
  for (const auto& e : it->second) {
    if (e.ticker && e.ticker != context.ticker) continue;
    if (e.date && e.date != context.date) continue;
    const int score = (e.ticker ? 1 : 0) + (e.date ? 1 : 0);
    if (score >= best_score) {
      best = &e;
      best_score = score;
    }
  }
  return best;
}

double ScriptedStub::draw(std::uint64_t seed, const CallContext& context) {
  // FNV-1a over the key feeds a standard engine; stable across platforms.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  mix(context.role);
  mix(context.ticker ? context.ticker->str() : "");
  mix(context.date ? context.date->iso() : "");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::mt19937_64 gen(seq);
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

namespace {

std::optional<std::string> labeled_value(const std::string& text, std::string_view label) {
  const auto pos = text.find(label);
  if (pos == std::string::npos) return std::nullopt;
  const auto start = pos + label.size();
  const auto end = text.find('\n', start);
  std::string v = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
  while (!v.empty() && (v.front() == ' ')) v.erase(v.begin());
  while (!v.empty() && (v.back() == ' ' || v.back() == '\r')) v.pop_back();
  return v;
}

std::size_t count_of(const std::string& text, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

std::string signal_json(std::string_view direction, std::string_view why) {
  Json j;
  j["signal"] = direction;
  j["justification"] = why;
  return j.dump();
}

std::string decision_json(std::string_view action, std::int64_t shares, const std::string& price,
                          std::string_view why) {
  Json j;
  j["action"] = action;
  j["shares"] = shares;
  j["price"] = price.empty() ? 0.0 : std::stod(price);
  j["justification"] = why;
  return j.dump();
}

}  // namespace

std::string ScriptedStub::default_answer(const ChatRequest& request) const {
  const std::string& role = request.context.role;
  const std::string& user = request.prompt.user;
  const bool follow = options_.mode == StubDefault::Follow;

  if (role == "Planner") {
    Json names = Json::array();
    if (auto listed = labeled_value(user, "Available analysts:")) {
      std::stringstream ss(*listed);
      std::string item;
      while (std::getline(ss, item, ',')) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        if (!item.empty()) names.push_back(item);
      }
    }
    return Json{{"analysts", names}}.dump();
  }

  if (role == "Manager") {
    const std::string price = labeled_value(user, "Current Price:").value_or("");
    std::int64_t tradable = 0;
    if (auto t = labeled_value(user, "Tradable Shares:")) {
      try {
        tradable = std::stoll(*t);
      } catch (const std::exception&) {
        tradable = 0;
      }
    }
    if (follow && tradable > 0) return decision_json("Buy", tradable, price, "Position is below its target weight.");
    if (follow && tradable < 0) return decision_json("Sell", -tradable, price, "Position is above its target weight.");
    return decision_json("Hold", 0, price, "No change to the position is warranted.");
  }

  if (follow && role == "Technical") {
    const std::string trend = labeled_value(user, "Price Trend Analysis:").value_or("");
    if (trend.rfind("Uptrend", 0) == 0) return signal_json("Bullish", "Short-term average is above the long-term average.");
    if (trend.rfind("Downtrend", 0) == 0) return signal_json("Bearish", "Short-term average is below the long-term average.");
    return signal_json("Neutral", "Trend indicators are flat.");
  }
  if (follow && role == "Insider") {
    const std::size_t buys = count_of(user, "InsiderBuy");
    const std::size_t sells = count_of(user, "InsiderSell");
    if (buys > sells) return signal_json("Bullish", "Insiders have been net buyers.");
    if (sells > buys) return signal_json("Bearish", "Insiders have been net sellers.");
    return signal_json("Neutral", "Insider activity is balanced.");
  }
  return signal_json("Neutral", "The provided data does not point in a clear direction.");
}

ChatReply ScriptedStub::send(const ChatRequest& request) {
  const CallContext& ctx = request.context;
  if (const ScriptEntry* e = lookup(ctx)) {
    if (e->fail_times < 0 || request.attempt <= e->fail_times || !e->response) {
      raise(ErrorKind::LlmUnavailable, "scripted failure for " + ctx.role);
    }
    return ChatReply{*e->response, {}};
  }
  const bool is_manager = ctx.role == "Manager";
  const bool is_planner = ctx.role == "Planner";
  const double rate = is_manager ? options_.decision_failure_rate
                                 : (is_planner ? 0.0 : options_.signal_failure_rate);
  if (rate > 0 && draw(options_.seed, ctx) < rate) {
    raise(ErrorKind::LlmUnavailable, "simulated outage for " + ctx.role);
  }
  return ChatReply{default_answer(request), {}};
}

}  // namespace livefund::llm
