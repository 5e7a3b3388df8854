#include "livefund/llm/gateway.hpp"

#include <spdlog/spdlog.h>

#include <thread>

#include "livefund/domain/error.hpp"

namespace livefund::llm {

LlmGateway::LlmGateway() : sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

void LlmGateway::register_provider(const std::string& provider_id, std::shared_ptr<ChatProvider> provider,
                                   std::chrono::milliseconds backoff) {
  if (!provider) raise(ErrorKind::InvalidArgument, "null chat provider for '" + provider_id + "'");
  providers_[provider_id] = Entry{std::move(provider), backoff};
}

bool LlmGateway::has_provider(const std::string& provider_id) const {
  return providers_.count(provider_id) > 0;
}

double LlmGateway::estimate_cost(const std::string& model_id, const TokenUsage& usage) const {
  const auto it = prices_.find(model_id);
  if (it == prices_.end()) {
    std::lock_guard lock(warn_mutex_);
    if (warned_models_.insert(model_id).second) {
      spdlog::warn("no price entry for model '{}'; recording zero cost", model_id);
    }
    return 0.0;
  }
  return (static_cast<double>(usage.prompt_tokens) * it->second.prompt_per_million +
          static_cast<double>(usage.completion_tokens) * it->second.completion_per_million) /
         1e6;
}

ChatExchange LlmGateway::complete(const ModelProfile& profile, const Prompt& prompt,
                                  const CallContext& context) const {
  const auto it = providers_.find(profile.provider_id);
  if (it == providers_.end()) {
    raise(ErrorKind::InvalidArgument, "no chat provider registered as '" + profile.provider_id + "'");
  }
  if (profile.max_retries < 0) raise(ErrorKind::InvalidArgument, "max_retries must be >= 0");

  ChatRequest request{profile.model_id, profile.temperature, profile.timeout, prompt, context, 1};
  ChatExchange exchange;
  exchange.system_prompt = prompt.system;
  exchange.user_prompt = prompt.user;

  auto backoff = it->second.backoff;
  std::string last_error;
  const int max_attempts = profile.max_retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    request.attempt = attempt;
    exchange.attempts = attempt;
    try {
      ChatReply reply = it->second.provider->send(request);
      exchange.response_text = std::move(reply.text);
      exchange.token_usage = reply.usage;
      exchange.cost_estimate = estimate_cost(profile.model_id, reply.usage);
      return exchange;
    } catch (const std::exception& e) {
      last_error = e.what();
      spdlog::debug("{} call attempt {}/{} failed: {}", context.role, attempt, max_attempts, last_error);
    }
    if (attempt < max_attempts && backoff.count() > 0) {
      sleep_(backoff);
      backoff *= 2;
    }
  }
  raise(ErrorKind::LlmUnavailable, profile.provider_id + "/" + profile.model_id + " failed after " +
                                       std::to_string(max_attempts) + " attempts: " + last_error);
}

}  // namespace livefund::llm
