#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "livefund/domain/types.hpp"

namespace livefund::llm {

struct ModelProfile {
  std::string provider_id;
  std::string model_id;
  double temperature = 0.5;
  int max_retries = 3;
  std::chrono::seconds timeout{60};
};

struct Prompt {
  std::string system;
  std::string user;

  bool operator==(const Prompt&) const = default;
};

/// Who is asking. Scripted providers key their answers on it; live
/// providers ignore it.
struct CallContext {
  std::string role;  // "Planner", "Manager", or an AnalystKind name
  std::optional<Ticker> ticker;
  std::optional<Date> date;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct ChatRequest {
  std::string model_id;
  double temperature = 0.5;
  std::chrono::seconds timeout{60};
  Prompt prompt;
  CallContext context;
  int attempt = 1;  // 1-based
};

struct ChatReply {
  std::string text;
  TokenUsage usage;
};

struct ChatExchange {
  std::string system_prompt;
  std::string user_prompt;
  std::optional<std::string> response_text;
  TokenUsage token_usage;
  double cost_estimate = 0.0;  // USD
  int attempts = 0;
};

}  // namespace livefund::llm
