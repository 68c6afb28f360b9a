#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/llm_client.hpp"

namespace harpioneer {

namespace {

class HttplibTransport final : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    // Split "scheme://host[:port]/path".
    const auto scheme_end = request.url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError(fmt::format("bad URL '{}'", request.url));
    const auto path_begin = request.url.find('/', scheme_end + 3);
    const std::string origin = request.url.substr(0, path_begin);
    const std::string path = path_begin == std::string::npos ? "/" : request.url.substr(path_begin);

    httplib::Client client(origin);
    const auto seconds = static_cast<time_t>(request.timeout.count());
    client.set_connection_timeout(seconds, 0);
    client.set_read_timeout(seconds, 0);
    client.set_write_timeout(seconds, 0);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(path, headers, request.body, content_type);
    if (!result) {
      const auto err = result.error();
      const auto elapsed = std::chrono::steady_clock::now() - started;
      if (err == httplib::Error::ConnectionTimeout ||
          (err == httplib::Error::Read && elapsed >= request.timeout)) {
        throw TimeoutError(fmt::format("request to {} timed out after {} s", origin, request.timeout.count()));
      }
      throw TransportError(0, fmt::format("request to {} failed: {}", origin, httplib::to_string(err)));
    }
    return HttpResponse{result->status, result->body};
  }
};

}  // namespace

std::shared_ptr<Transport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace harpioneer
