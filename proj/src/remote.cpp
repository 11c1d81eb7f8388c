#include "taskworld/remote.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "httplib.h"

namespace taskworld {

using nlohmann::json;

namespace {

// Process-wide in-flight gate; each call respects its endpoint's cap.
class InFlightGate {
 public:
  explicit InFlightGate(int cap) : cap_(std::max(1, cap)) {
    std::unique_lock lock(mutex());
    cv().wait(lock, [&] { return active() < cap_; });
    ++active();
  }

  ~InFlightGate() {
    {
      std::lock_guard lock(mutex());
      --active();
    }
    cv().notify_one();
  }

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  static std::condition_variable& cv() {
    static std::condition_variable c;
    return c;
  }
  static int& active() {
    static int n = 0;
    return n;
  }
  int cap_;
};

struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "endpoint url must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteEndpoint endpoint_from_env(const char* url_var, const char* token_var) {
  RemoteEndpoint ep;
  const char* url = std::getenv(url_var);
  if (!url || !*url) {
    throw Error(ErrorCode::ConfigError,
                std::string("environment variable ") + url_var + " is not set");
  }
  ep.url = url;
  if (const char* token = std::getenv(token_var); token) ep.token = token;
  return ep;
}

json post_json(const RemoteEndpoint& endpoint, const json& body, ErrorCode unavailable_code) {
  const SplitUrl split = split_url(endpoint.url);
  InFlightGate gate(endpoint.max_in_flight);

  httplib::Client client(split.origin);
  const auto timeout = std::chrono::duration<double>(endpoint.timeout_seconds);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!endpoint.token.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.token);
  }

  std::string last_failure;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    }
    auto res = client.Post(split.path, headers, body.dump(), "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "server returned status " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(unavailable_code,
                  "endpoint rejected the request with status " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("invalid JSON reply: ") + e.what());
    }
  }
  throw Error(unavailable_code, endpoint.url + " unreachable after " +
                                    std::to_string(endpoint.max_retries + 1) +
                                    " attempts (" + last_failure + ")");
}

}  // namespace taskworld
