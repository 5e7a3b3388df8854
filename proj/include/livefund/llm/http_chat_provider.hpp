#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "livefund/llm/gateway.hpp"
#include "livefund/llm/rate_limiter.hpp"
#include "livefund/market/http_client.hpp"

namespace livefund::llm {

enum class RequestStyle {
  Messages,     // system prompt is the first chat message
  SystemField,  // top-level "system" field, user message only
};

RequestStyle parse_request_style(std::string_view text);

/// Wire description of a chat-completions style endpoint. Everything that
/// differs between vendors lives here rather than in code.
struct HttpChatConfig {
  std::string endpoint;
  std::string api_key;
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  RequestStyle style = RequestStyle::Messages;
  std::vector<std::pair<std::string, std::string>> extra_headers;
  std::optional<int> max_tokens;
  std::string text_pointer = "/choices/0/message/content";
  std::string prompt_tokens_pointer = "/usage/prompt_tokens";
  std::string completion_tokens_pointer = "/usage/completion_tokens";
  double requests_per_second = 0.0;
  double burst = 1.0;
};

class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(HttpChatConfig config, std::shared_ptr<net::HttpTransport> transport);

  ChatReply send(const ChatRequest& request) override;

  /// Request body for `request`; exposed for tests.
  std::string build_body(const ChatRequest& request) const;
  /// Throws LlmUnavailable when the text field is missing.
  ChatReply parse_reply(const std::string& body) const;

 private:
  HttpChatConfig config_;
  std::shared_ptr<net::HttpTransport> transport_;
  TokenBucket bucket_;
};

}  // namespace livefund::llm
