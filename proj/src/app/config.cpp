#include "livefund/app/config.hpp"

#include <toml.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "livefund/domain/error.hpp"

namespace livefund::app {

namespace fs = std::filesystem;

namespace {

std::string where(const fs::path& file, const toml::source_region& src) {
  return file.string() + ":" + std::to_string(src.begin.line) + ":" + std::to_string(src.begin.column);
}

/// Typed access to one table with location-bearing errors.
class Section {
 public:
  Section(const toml::table& table, std::string name, const fs::path& file)
      : table_(table), name_(std::move(name)), file_(file) {}

  void allow(std::initializer_list<std::string_view> keys) const {
    const std::set<std::string_view> ok(keys);
    for (const auto& [k, v] : table_) {
      if (!ok.count(k.str())) {
        fail(v, "unknown key '" + std::string(k.str()) + "' in [" + name_ + "]");
      }
    }
  }

  [[noreturn]] void fail(const toml::node& node, const std::string& msg) const {
    raise(ErrorKind::ConfigError, where(file_, node.source()) + ": " + msg);
  }
  [[noreturn]] void fail_here(const std::string& msg) const {
    raise(ErrorKind::ConfigError, where(file_, table_.source()) + ": " + msg);
  }

  const toml::node* node(std::string_view key) const { return table_.get(key); }
  bool has(std::string_view key) const { return table_.contains(key); }

  std::optional<std::string> str(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    if (!n->is_string()) fail(*n, "'" + std::string(key) + "' must be a string");
    return n->value<std::string>();
  }
  std::optional<double> num(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    if (!n->is_number()) fail(*n, "'" + std::string(key) + "' must be a number");
    return n->value<double>();
  }
  std::optional<std::int64_t> integer(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    if (!n->is_integer()) fail(*n, "'" + std::string(key) + "' must be an integer");
    return n->value<std::int64_t>();
  }
  std::optional<bool> boolean(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) fail(*n, "'" + std::string(key) + "' must be true or false");
    return n->value<bool>();
  }
  std::optional<std::vector<std::string>> strings(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    const auto* arr = n->as_array();
    if (!arr) fail(*n, "'" + std::string(key) + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *arr) {
      if (!item.is_string()) fail(item, "'" + std::string(key) + "' must contain strings only");
      out.push_back(*item.value<std::string>());
    }
    return out;
  }
  std::optional<Date> date(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    if (const auto* d = n->as_date()) {
      const auto v = d->get();
      return Date(v.year, v.month, v.day);
    }
    if (n->is_string()) {
      if (auto parsed = Date::try_parse(*n->value<std::string>())) return parsed;
    }
    fail(*n, "'" + std::string(key) + "' must be a date (YYYY-MM-DD)");
  }
  std::optional<Section> sub(std::string_view key) const {
    const auto* n = node(key);
    if (!n) return std::nullopt;
    const auto* t = n->as_table();
    if (!t) fail(*n, "'" + std::string(key) + "' must be a table");
    return Section(*t, name_.empty() ? std::string(key) : name_ + "." + std::string(key), file_);
  }

  template <typename Fn>
  auto convert(std::string_view key, Fn&& fn, const std::string& value) const {
    try {
      return fn(value);
    } catch (const Error& e) {
      fail(*node(key), e.what());
    }
  }

  const toml::table& table() const { return table_; }
  const std::string& name() const { return name_; }

 private:
  const toml::table& table_;
  std::string name_;
  fs::path file_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string default_key_env(const std::string& provider_id) {
  std::string out;
  for (char c : provider_id) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                                              : '_');
  }
  return out + "_API_KEY";
}

void parse_run(const Section& s, AppConfig& c) {
  s.allow({"run_id", "model_label", "mode", "universe", "initial_cash", "start_date", "end_date", "planner_mode",
           "analysts", "decision_memory_size", "parallelism"});
  auto& r = c.run;
  if (auto v = s.str("run_id")) r.run_id = *v;
  if (auto v = s.str("model_label")) c.model_label = *v;
  if (auto v = s.str("mode")) {
    if (*v != "replay" && *v != "live") s.fail(*s.node("mode"), "mode must be \"replay\" or \"live\"");
    c.mode = *v;
  }
  if (auto v = s.strings("universe")) {
    r.universe.clear();
    for (const auto& t : *v) {
      r.universe.push_back(s.convert("universe", [](const std::string& x) { return Ticker(x); }, t));
    }
  }
  if (const auto* n = s.node("initial_cash")) {
    if (n->is_number()) {
      r.initial_cash = Money::from_double(*n->value<double>());
    } else if (n->is_string()) {
      r.initial_cash =
          s.convert("initial_cash", [](const std::string& x) { return Money::parse(x); }, *n->value<std::string>());
    } else {
      s.fail(*n, "'initial_cash' must be a number");
    }
  }
  if (auto v = s.date("start_date")) r.start_date = *v;
  if (auto v = s.date("end_date")) r.end_date = *v;
  if (auto v = s.str("planner_mode")) {
    if (*v == "deterministic") {
      r.planner_mode = workflow::PlannerMode::Deterministic;
    } else if (*v == "dynamic") {
      r.planner_mode = workflow::PlannerMode::Dynamic;
    } else {
      s.fail(*s.node("planner_mode"), "planner_mode must be \"deterministic\" or \"dynamic\"");
    }
  }
  if (auto v = s.strings("analysts")) {
    r.analyst_set.clear();
    for (const auto& a : *v) {
      r.analyst_set.push_back(s.convert("analysts", [](const std::string& x) { return parse_analyst(x); }, a));
    }
  }
  if (auto v = s.integer("decision_memory_size")) {
    if (*v < 1) s.fail(*s.node("decision_memory_size"), "decision_memory_size must be >= 1");
    r.decision_memory_size = static_cast<std::size_t>(*v);
  }
  if (auto v = s.integer("parallelism")) {
    if (*v < 1) s.fail(*s.node("parallelism"), "parallelism must be >= 1");
    r.parallelism = static_cast<std::size_t>(*v);
  }
}

void parse_risk(const Section& s, AppConfig& c) {
  s.allow({"base_weight_mode", "tilt_factor", "max_weight"});
  if (auto v = s.str("base_weight_mode"); v && *v != "equal_weight") {
    s.fail(*s.node("base_weight_mode"), "only \"equal_weight\" is supported");
  }
  if (auto v = s.num("tilt_factor")) c.run.risk.tilt_factor = *v;
  if (auto v = s.num("max_weight")) c.run.risk.max_weight = *v;
}

void parse_model(const Section& s, AppConfig& c) {
  s.allow({"provider", "model_id", "temperature", "max_retries", "timeout_seconds"});
  auto& m = c.run.model;
  if (auto v = s.str("provider")) m.provider_id = *v;
  if (auto v = s.str("model_id")) m.model_id = *v;
  if (auto v = s.num("temperature")) {
    if (*v < 0 || *v > 2) s.fail(*s.node("temperature"), "temperature must be in [0, 2]");
    m.temperature = *v;
  }
  if (auto v = s.integer("max_retries")) {
    if (*v < 0) s.fail(*s.node("max_retries"), "max_retries must be >= 0");
    m.max_retries = static_cast<int>(*v);
  }
  if (auto v = s.integer("timeout_seconds")) {
    if (*v < 1) s.fail(*s.node("timeout_seconds"), "timeout_seconds must be >= 1");
    m.timeout = std::chrono::seconds(*v);
  }
}

void parse_data(const Section& s, AppConfig& c, const fs::path& base) {
  s.allow({"live_provider", "fixtures", "ledger_dir", "base_url", "api_key_env", "cache", "technical_window", "news_count",
           "insider_count", "macro_count", "retry_attempts", "retry_backoff_ms"});
  auto& d = c.data;
  if (auto v = s.str("live_provider")) c.live_provider = *v;
  if (auto v = s.str("fixtures")) d.fixture_dir = resolve(base, *v);
  if (auto v = s.str("ledger_dir")) c.ledger_dir = resolve(base, *v);
  if (auto v = s.str("base_url")) d.base_url = *v;
  if (auto v = s.str("api_key_env")) d.api_key_env = *v;
  if (auto v = s.boolean("cache")) d.cache = *v;
  auto count = [&](std::string_view key, std::size_t& out, std::int64_t min) {
    if (auto v = s.integer(key)) {
      if (*v < min) s.fail(*s.node(key), "'" + std::string(key) + "' must be >= " + std::to_string(min));
      out = static_cast<std::size_t>(*v);
    }
  };
  count("technical_window", c.run.windows.technical_window, 2);
  count("news_count", c.run.windows.news_count, 1);
  count("insider_count", c.run.windows.insider_count, 1);
  count("macro_count", c.run.windows.macro_count, 1);
  if (auto v = s.integer("retry_attempts")) {
    if (*v < 1) s.fail(*s.node("retry_attempts"), "retry_attempts must be >= 1");
    d.retry.attempts = static_cast<int>(*v);
  }
  if (auto v = s.integer("retry_backoff_ms")) d.retry.initial_backoff = std::chrono::milliseconds(*v);
}

ProviderProfile parse_provider(const Section& s, const std::string& id, const fs::path& base) {
  ProviderProfile p;
  p.id = id;
  p.kind = s.str("kind").value_or("");
  if (p.kind == "scripted") {
    s.allow({"kind", "script", "default", "seed", "signal_failure_rate", "decision_failure_rate", "backoff_ms"});
    if (auto v = s.str("script")) p.script = resolve(base, *v);
    if (auto v = s.str("default")) {
      p.stub.mode = s.convert("default", [](const std::string& x) { return llm::parse_stub_default(x); }, *v);
    }
    if (auto v = s.integer("seed")) p.stub.seed = static_cast<std::uint64_t>(*v);
    auto rate = [&](std::string_view key, double& out) {
      if (auto v = s.num(key)) {
        if (*v < 0 || *v > 1) s.fail(*s.node(key), "'" + std::string(key) + "' must be in [0, 1]");
        out = *v;
      }
    };
    rate("signal_failure_rate", p.stub.signal_failure_rate);
    rate("decision_failure_rate", p.stub.decision_failure_rate);
    p.backoff = std::chrono::milliseconds(0);
  } else if (p.kind == "http") {
    s.allow({"kind", "endpoint", "api_key_env", "auth_header", "auth_prefix", "style", "headers", "max_tokens",
             "text_pointer", "prompt_tokens_pointer", "completion_tokens_pointer", "requests_per_second", "burst",
             "backoff_ms"});
    auto& h = p.http;
    h.endpoint = s.str("endpoint").value_or("");
    if (h.endpoint.empty()) s.fail_here("http provider '" + id + "' needs an endpoint");
    p.api_key_env = s.str("api_key_env").value_or(default_key_env(id));
    if (auto v = s.str("auth_header")) h.auth_header = *v;
    if (auto v = s.str("auth_prefix")) h.auth_prefix = *v;
    if (auto v = s.str("style")) {
      h.style = s.convert("style", [](const std::string& x) { return llm::parse_request_style(x); }, *v);
    }
    if (auto headers = s.sub("headers")) {
      for (const auto& [k, v] : headers->table()) {
        if (!v.is_string()) headers->fail(v, "header values must be strings");
        h.extra_headers.emplace_back(std::string(k.str()), *v.value<std::string>());
      }
    }
    if (auto v = s.integer("max_tokens")) h.max_tokens = static_cast<int>(*v);
    if (auto v = s.str("text_pointer")) h.text_pointer = *v;
    if (auto v = s.str("prompt_tokens_pointer")) h.prompt_tokens_pointer = *v;
    if (auto v = s.str("completion_tokens_pointer")) h.completion_tokens_pointer = *v;
    if (auto v = s.num("requests_per_second")) h.requests_per_second = *v;
    if (auto v = s.num("burst")) h.burst = *v;
  } else {
    const auto* n = s.node("kind");
    if (n) s.fail(*n, "provider kind must be \"scripted\" or \"http\"");
    s.fail_here("provider '" + id + "' has no kind");
  }
  if (auto v = s.integer("backoff_ms")) {
    if (*v < 0) s.fail(*s.node("backoff_ms"), "backoff_ms must be >= 0");
    p.backoff = std::chrono::milliseconds(*v);
  }
  return p;
}

}  // namespace

AppConfig parse_config(std::string_view text, const fs::path& source_name) {
  toml::table root;
  try {
    root = toml::parse(text, source_name.string());
  } catch (const toml::parse_error& e) {
    raise(ErrorKind::ConfigError, where(source_name, e.source()) + ": " + std::string(e.description()));
  }
  const fs::path base = source_name.has_parent_path() ? source_name.parent_path() : fs::path(".");

  AppConfig c;
  c.source = source_name;
  c.data.kind = "replay";
  c.ledger_dir = resolve(base, "out");
  c.run.model.provider_id = "stub";
  c.run.model.model_id = "scripted";

  const Section top(root, "", source_name);
  top.allow({"run", "risk", "model", "data", "providers", "prices", "logging"});
  if (auto s = top.sub("run")) parse_run(*s, c);
  if (auto s = top.sub("risk")) parse_risk(*s, c);
  if (auto s = top.sub("model")) parse_model(*s, c);
  if (auto s = top.sub("data")) parse_data(*s, c, base);
  if (auto s = top.sub("providers")) {
    for (const auto& [id, node] : s->table()) {
      const auto* t = node.as_table();
      if (!t) s->fail(node, "provider '" + std::string(id.str()) + "' must be a table");
      const Section ps(*t, "providers." + std::string(id.str()), source_name);
      c.providers.emplace(std::string(id.str()), parse_provider(ps, std::string(id.str()), base));
    }
  }
  if (auto s = top.sub("prices")) {
    for (const auto& [model, node] : s->table()) {
      const auto* t = node.as_table();
      if (!t) s->fail(node, "price entry '" + std::string(model.str()) + "' must be a table");
      const Section ps(*t, "prices." + std::string(model.str()), source_name);
      ps.allow({"prompt_per_million", "completion_per_million"});
      llm::ModelPrice price;
      price.prompt_per_million = ps.num("prompt_per_million").value_or(0.0);
      price.completion_per_million = ps.num("completion_per_million").value_or(0.0);
      if (price.prompt_per_million < 0 || price.completion_per_million < 0) ps.fail_here("prices must be >= 0");
      c.prices[std::string(model.str())] = price;
    }
  }
  if (auto s = top.sub("logging")) {
    s->allow({"level"});
    if (auto v = s->str("level")) c.log_level = *v;
  }

  if (c.model_label.empty()) c.model_label = c.run.model.model_id;
  if (c.data.fixture_dir.empty()) c.data.fixture_dir = resolve(base, "fixtures");
  if (!c.providers.count(c.run.model.provider_id)) {
    if (c.run.model.provider_id == "stub") {
      ProviderProfile stub;
      stub.id = "stub";
      stub.kind = "scripted";
      stub.backoff = std::chrono::milliseconds(0);
      c.providers.emplace("stub", stub);
    } else {
      raise(ErrorKind::ConfigError, source_name.string() + ": [model] provider '" + c.run.model.provider_id +
                                        "' has no [providers." + c.run.model.provider_id + "] section");
    }
  }
  return c;
}

AppConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) raise(ErrorKind::ConfigError, "cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file);
}

void register_chat_providers(const AppConfig& config, llm::LlmGateway& gateway,
                             std::shared_ptr<net::HttpTransport> transport) {
  gateway.set_price_table(config.prices);
  for (const auto& [id, p] : config.providers) {
    if (p.kind == "scripted") {
      auto script = p.script ? llm::ScriptedStub::load_script(*p.script) : std::vector<llm::ScriptEntry>{};
      gateway.register_provider(id, std::make_shared<llm::ScriptedStub>(std::move(script), p.stub), p.backoff);
      continue;
    }
    // Only the provider the run uses needs a key.
    if (id != config.run.model.provider_id) continue;
    const char* key = std::getenv(p.api_key_env.c_str());
    if (!key || !*key) {
      raise(ErrorKind::MissingCredential, "environment variable " + p.api_key_env + " is not set for provider '" + id + "'");
    }
    llm::HttpChatConfig http = p.http;
    http.api_key = key;
    if (!transport) transport = net::make_http_transport();
    gateway.register_provider(id, std::make_shared<llm::HttpChatProvider>(std::move(http), transport), p.backoff);
  }
}

}  // namespace livefund::app
