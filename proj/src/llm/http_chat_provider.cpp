#include "livefund/llm/http_chat_provider.hpp"

#include "livefund/domain/error.hpp"
#include "livefund/domain/serialization.hpp"

namespace livefund::llm {

RequestStyle parse_request_style(std::string_view text) {
  if (text == "messages") return RequestStyle::Messages;
  if (text == "system_field") return RequestStyle::SystemField;
  raise(ErrorKind::ConfigError, "unknown request style '" + std::string(text) +
                                    "' (expected messages or system_field)");
}

HttpChatProvider::HttpChatProvider(HttpChatConfig config, std::shared_ptr<net::HttpTransport> transport)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      bucket_(config_.requests_per_second, config_.burst) {
  if (!transport_) raise(ErrorKind::InvalidArgument, "null HTTP transport");
  if (config_.endpoint.empty()) raise(ErrorKind::ConfigError, "chat provider endpoint is empty");
}

std::string HttpChatProvider::build_body(const ChatRequest& request) const {
  Json body;
  body["model"] = request.model_id;
  body["temperature"] = request.temperature;
  if (config_.max_tokens) body["max_tokens"] = *config_.max_tokens;
  Json messages = Json::array();
  if (config_.style == RequestStyle::Messages) {
    messages.push_back({{"role", "system"}, {"content", request.prompt.system}});
  } else {
    body["system"] = request.prompt.system;
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt.user}});
  body["messages"] = std::move(messages);
  return body.dump();
}

namespace {

std::int64_t token_count(const Json& body, const std::string& pointer) {
  if (pointer.empty()) return 0;
  const Json::json_pointer ptr(pointer);
  if (!body.contains(ptr)) return 0;
  const Json& v = body.at(ptr);
  return v.is_number_integer() && v.get<std::int64_t>() > 0 ? v.get<std::int64_t>() : 0;
}

}  // namespace

ChatReply HttpChatProvider::parse_reply(const std::string& text) const {
  Json body;
  try {
    body = Json::parse(text);
  } catch (const std::exception& e) {
    raise(ErrorKind::LlmUnavailable, std::string("response is not JSON: ") + e.what());
  }
  const Json::json_pointer ptr(config_.text_pointer);
  if (!body.contains(ptr) || !body.at(ptr).is_string()) {
    raise(ErrorKind::LlmUnavailable, "response has no text at " + config_.text_pointer);
  }
  ChatReply reply;
  reply.text = body.at(ptr).get<std::string>();
  reply.usage.prompt_tokens = token_count(body, config_.prompt_tokens_pointer);
  reply.usage.completion_tokens = token_count(body, config_.completion_tokens_pointer);
  return reply;
}

ChatReply HttpChatProvider::send(const ChatRequest& request) {
  bucket_.acquire();
  net::HttpRequest http;
  http.method = "POST";
  http.url = config_.endpoint;
  http.body = build_body(request);
  http.timeout = request.timeout;
  if (!config_.auth_header.empty()) {
    http.headers.emplace_back(config_.auth_header, config_.auth_prefix + config_.api_key);
  }
  for (const auto& h : config_.extra_headers) http.headers.push_back(h);
  const net::HttpResponse response = transport_->send(http);
  if (response.status != 200) {
    raise(ErrorKind::LlmUnavailable, "HTTP " + std::to_string(response.status) + " from " + config_.endpoint);
  }
  return parse_reply(response.body);
}

}  // namespace livefund::llm
