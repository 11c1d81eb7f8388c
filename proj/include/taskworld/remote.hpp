#pragma once

#include <string>

#include "json.hpp"
#include "taskworld/errors.hpp"

namespace taskworld {

struct RemoteEndpoint {
  std::string url;    // full endpoint, e.g. http://127.0.0.1:8080/plan
  std::string token;  // bearer token, may be empty
  double timeout_seconds = 30.0;
  int max_retries = 2;    // additional attempts after the first
  int max_in_flight = 4;  // concurrent request cap
};

// Reads the endpoint from the environment; throws ConfigError when the URL
// variable is unset.
RemoteEndpoint endpoint_from_env(const char* url_var, const char* token_var);

// POSTs the body as JSON and parses the JSON reply. Connection failures,
// timeouts and 5xx responses are retried with a short backoff, then surface
// as `unavailable_code`. Non-JSON replies raise ParseError.
nlohmann::json post_json(const RemoteEndpoint& endpoint, const nlohmann::json& body,
                         ErrorCode unavailable_code);

}  // namespace taskworld
