#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "livefund/llm/gateway.hpp"
#include "livefund/llm/http_chat_provider.hpp"
#include "livefund/llm/scripted_stub.hpp"
#include "livefund/market/gateway.hpp"
#include "livefund/workflow/engine.hpp"

namespace livefund::app {

struct ProviderProfile {
  std::string id;
  std::string kind;  // "scripted" or "http"
  std::chrono::milliseconds backoff{1000};
  // scripted
  std::optional<std::filesystem::path> script;
  llm::StubOptions stub;
  // http; api_key is filled from api_key_env when the provider is built
  llm::HttpChatConfig http;
  std::string api_key_env;
};

struct AppConfig {
  std::filesystem::path source;
  workflow::RunConfig run;
  std::string model_label;
  std::string mode = "replay";
  std::string live_provider = "alpha-vantage";  // data provider kind for live mode
  market::ProviderConfig data;                  // kind is set per mode
  std::filesystem::path ledger_dir;
  std::map<std::string, ProviderProfile> providers;
  llm::PriceTable prices;
  std::string log_level = "info";
};

/// Parses a TOML config. Relative paths resolve against the file's
/// directory. Unknown keys and type errors raise ConfigError with
/// file:line:column.
AppConfig load_config(const std::filesystem::path& file);
AppConfig parse_config(std::string_view text, const std::filesystem::path& source_name);

/// Registers every configured chat provider. HTTP providers read their key
/// from the environment and raise MissingCredential when it is unset.
void register_chat_providers(const AppConfig& config, llm::LlmGateway& gateway,
                             std::shared_ptr<net::HttpTransport> transport = nullptr);

}  // namespace livefund::app
