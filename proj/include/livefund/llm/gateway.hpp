#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "livefund/llm/types.hpp"

namespace livefund::llm {

/// One chat backend. A failed attempt throws (any exception); the gateway
/// owns retries.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ChatReply send(const ChatRequest& request) = 0;
};

struct ModelPrice {
  double prompt_per_million = 0.0;
  double completion_per_million = 0.0;
};

using PriceTable = std::map<std::string, ModelPrice>;

/// Provider registry plus the retry loop every agent role goes through.
class LlmGateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  LlmGateway();

  /// `backoff` is the wait before the second attempt; it doubles afterwards.
  void register_provider(const std::string& provider_id, std::shared_ptr<ChatProvider> provider,
                         std::chrono::milliseconds backoff = std::chrono::milliseconds{1000});
  bool has_provider(const std::string& provider_id) const;
  void set_price_table(PriceTable prices) { prices_ = std::move(prices); }
  void set_sleeper(Sleeper sleeper) { sleep_ = std::move(sleeper); }

  /// At most max_retries + 1 provider calls. Throws LlmUnavailable when all
  /// of them fail and InvalidArgument for an unregistered provider.
  ChatExchange complete(const ModelProfile& profile, const Prompt& prompt,
                        const CallContext& context = {}) const;

  double estimate_cost(const std::string& model_id, const TokenUsage& usage) const;

 private:
  struct Entry {
    std::shared_ptr<ChatProvider> provider;
    std::chrono::milliseconds backoff;
  };

  std::map<std::string, Entry> providers_;
  PriceTable prices_;
  Sleeper sleep_;
  mutable std::mutex warn_mutex_;
  mutable std::set<std::string> warned_models_;
};

}  // namespace livefund::llm
