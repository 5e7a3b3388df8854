#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace livefund::net {

struct HttpRequest {
  std::string method = "GET";
  std::string url;  // scheme://host[:port]/path?query
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::string content_type = "application/json";
  std::chrono::seconds timeout{30};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Blocking HTTP transport. Connection-level failures throw
/// ProviderUnavailable; HTTP error statuses are returned to the caller.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

std::shared_ptr<HttpTransport> make_http_transport();

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
void real_sleep(std::chrono::milliseconds d);

/// Sends with exponential backoff on connection failures, 429 and 5xx.
/// Throws ProviderUnavailable when every attempt failed.
HttpResponse send_with_retries(HttpTransport& transport, const HttpRequest& request,
                               const RetryPolicy& policy, const Sleeper& sleep = real_sleep);

std::string url_encode(std::string_view text);

}  // namespace livefund::net
