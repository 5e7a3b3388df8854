#include "livefund/llm/parsers.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "livefund/domain/error.hpp"
#include "livefund/domain/serialization.hpp"

namespace livefund::llm {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Markdown decoration and quotes around a value.
std::string strip_decoration(std::string_view s) {
  std::string v = trim(s);
  auto junk = [](char c) { return c == '*' || c == '"' || c == '\'' || c == '`' || c == '_'; };
  while (!v.empty() && junk(v.front())) v.erase(v.begin());
  while (!v.empty() && junk(v.back())) v.pop_back();
  return trim(v);
}

/// The outermost {...} in the text that parses as a JSON object.
std::optional<Json> find_json_object(std::string_view text) {
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::nullopt;
  try {
    Json j = Json::parse(text.substr(open, close - open + 1));
    if (j.is_object()) return j;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

/// "key: value" lines, keys lower-cased. A key with an empty value takes
/// the following non-label lines.
std::map<std::string, std::string> labeled_lines(std::string_view text,
                                                 const std::vector<std::string_view>& keys) {
  std::map<std::string, std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;

    std::string bare = line;
    while (!bare.empty() && (bare.front() == '-' || bare.front() == '*' || bare.front() == '#' ||
                             bare.front() == ' ')) {
      bare.erase(bare.begin());
    }
    const auto colon = bare.find(':');
    bool matched = false;
    if (colon != std::string::npos) {
      const std::string key = lower(strip_decoration(bare.substr(0, colon)));
      if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
        current = key;
        out[key] = strip_decoration(bare.substr(colon + 1));
        matched = true;
      }
    }
    if (!matched && !current.empty() && !line.empty()) {
      std::string& v = out[current];
      v += v.empty() ? line : " " + line;
    }
    if (end == text.size()) break;
  }
  return out;
}

std::string json_text(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  const Json& v = j.at(key);
  if (v.is_string()) return trim(v.get<std::string>());
  if (v.is_null()) return {};
  return v.dump();
}

std::optional<std::int64_t> integral_text(std::string_view text) {
  std::string s = strip_decoration(text);
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(d) || d != std::floor(d) || std::abs(d) >= 9e15) return std::nullopt;
    return static_cast<std::int64_t>(d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<std::int64_t> integral(const Json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    return std::nullopt;
  }
  if (v.is_string()) return integral_text(v.get<std::string>());
  return std::nullopt;
}

std::optional<Price> price_value(const Json& v) {
  try {
    if (v.is_number()) {
      const double d = v.get<double>();
      if (!std::isfinite(d) || d <= 0) return std::nullopt;
      return Price::from_double(d);
    }
    if (v.is_string()) {
      std::string s = strip_decoration(v.get<std::string>());
      if (!s.empty() && s.front() == '$') s.erase(s.begin());
      if (s.empty()) return std::nullopt;
      const double d = std::stod(s);
      if (!std::isfinite(d) || d <= 0) return std::nullopt;
      return Price::from_double(d);
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

ParsedSignal parse_signal_response(std::string_view text) {
  std::string direction;
  std::string justification;
  if (auto j = find_json_object(text)) {
    direction = json_text(*j, "signal");
    justification = json_text(*j, "justification");
  } else {
    auto fields = labeled_lines(text, {"signal", "justification"});
    direction = fields["signal"];
    justification = fields["justification"];
  }
  if (direction.empty()) raise(ErrorKind::MalformedSignalResponse, "response has no signal field");
  if (justification.empty()) raise(ErrorKind::MalformedSignalResponse, "response has no justification");
  ParsedSignal out;
  try {
    out.direction = parse_direction(direction);
  } catch (const Error& e) {
    raise(ErrorKind::MalformedSignalResponse, e.what());
  }
  out.justification = std::move(justification);
  return out;
}

ParsedDecision parse_decision_response(std::string_view text) {
  std::string action;
  std::optional<std::int64_t> shares;
  bool shares_present = false;
  std::optional<Price> price;
  std::string justification;

  if (auto j = find_json_object(text)) {
    action = json_text(*j, "action");
    if (j->contains("shares") && !j->at("shares").is_null()) {
      shares_present = true;
      shares = integral(j->at("shares"));
    }
    if (j->contains("price") && !j->at("price").is_null()) price = price_value(j->at("price"));
    justification = json_text(*j, "justification");
  } else {
    auto fields = labeled_lines(text, {"action", "shares", "price", "justification"});
    action = fields["action"];
    if (!fields["shares"].empty()) {
      shares_present = true;
      shares = integral_text(fields["shares"]);
    }
    if (!fields["price"].empty()) price = price_value(Json(fields["price"]));
    justification = fields["justification"];
  }

  if (action.empty()) raise(ErrorKind::MalformedDecisionResponse, "response has no action field");
  ParsedDecision out;
  try {
    out.action = parse_action(action);
  } catch (const Error& e) {
    raise(ErrorKind::MalformedDecisionResponse, e.what());
  }
  if (shares_present && !shares) raise(ErrorKind::MalformedDecisionResponse, "shares is not a whole number");
  if (justification.empty()) raise(ErrorKind::MalformedDecisionResponse, "response has no justification");
  out.justification = std::move(justification);
  out.price = price;

  if (out.action == DecisionAction::Hold) {
    if (shares.value_or(0) != 0) {
      spdlog::warn("Hold decision arrived with {} shares; treating as 0", *shares);
      out.shares_normalized = true;
    }
    out.shares = 0;
  } else {
    if (!shares) raise(ErrorKind::MalformedDecisionResponse, "Buy/Sell decision has no share count");
    if (*shares <= 0) {
      raise(ErrorKind::MalformedDecisionResponse,
            std::string(to_string(out.action)) + " with " + std::to_string(*shares) + " shares");
    }
    out.shares = *shares;
  }
  return out;
}

std::vector<AnalystKind> parse_planner_response(std::string_view text, const std::vector<AnalystKind>& available) {
  Json list;
  try {
    const auto obj_open = text.find('{');
    const auto arr_open = text.find('[');
    if (obj_open != std::string_view::npos && (arr_open == std::string_view::npos || obj_open < arr_open)) {
      auto j = find_json_object(text);
      if (!j || !j->contains("analysts")) raise(ErrorKind::MalformedPlannerResponse, "no analysts list");
      list = j->at("analysts");
    } else if (arr_open != std::string_view::npos) {
      const auto close = text.rfind(']');
      if (close == std::string_view::npos || close < arr_open) {
        raise(ErrorKind::MalformedPlannerResponse, "unterminated list");
      }
      list = Json::parse(text.substr(arr_open, close - arr_open + 1));
    } else {
      raise(ErrorKind::MalformedPlannerResponse, "no list in planner response");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorKind::MalformedPlannerResponse, e.what());
  }
  if (!list.is_array()) raise(ErrorKind::MalformedPlannerResponse, "analysts is not a list");

  std::vector<AnalystKind> out;
  for (const auto& item : list) {
    if (!item.is_string()) continue;
    AnalystKind k{};
    try {
      k = parse_analyst(item.get<std::string>());
    } catch (const Error&) {
      spdlog::warn("planner named unknown analyst '{}'", item.get<std::string>());
      continue;
    }
    if (std::find(available.begin(), available.end(), k) == available.end()) continue;
    if (std::find(out.begin(), out.end(), k) != out.end()) continue;
    out.push_back(k);
  }
  if (out.empty()) raise(ErrorKind::MalformedPlannerResponse, "planner selected no available analyst");
  return out;
}

}  // namespace livefund::llm
