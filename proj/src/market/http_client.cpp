#include "livefund/market/http_client.hpp"

#include <httplib.h>

#include <thread>

#include "livefund/domain/error.hpp"

namespace livefund::net {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host:port
  std::string target;  // /path?query
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) raise(ErrorKind::InvalidArgument, "URL without scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    const auto [origin, target] = split_url(request.url);
    httplib::Client client(origin);
    client.set_connection_timeout(request.timeout);
    client.set_read_timeout(request.timeout);
    client.set_write_timeout(request.timeout);
    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);

    httplib::Result result = request.method == "POST"
                                 ? client.Post(target, headers, request.body, request.content_type)
                                 : client.Get(target, headers);
    if (!result) {
      raise(ErrorKind::ProviderUnavailable,
            "HTTP " + request.method + " " + origin + " failed: " + httplib::to_string(result.error()));
    }
    return HttpResponse{result->status, result->body};
  }
};

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

HttpResponse send_with_retries(HttpTransport& transport, const HttpRequest& request,
                               const RetryPolicy& policy, const Sleeper& sleep) {
  const int attempts = std::max(1, policy.attempts);
  auto backoff = policy.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      HttpResponse response = transport.send(request);
      if (!retryable_status(response.status)) return response;
      last_error = "status " + std::to_string(response.status);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProviderUnavailable) throw;
      last_error = e.what();
    }
    if (attempt < attempts) {
      sleep(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<std::int64_t>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
  }
  raise(ErrorKind::ProviderUnavailable,
        "giving up after " + std::to_string(attempts) + " attempts: " + last_error);
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == ',') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

}  // namespace livefund::net
