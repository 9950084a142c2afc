/*
 * Copyright 2026 The ragfix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ragfix/http.hpp"

#ifdef RAGFIX_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>
#include <regex>
#include <thread>

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw ConfigError("malformed endpoint URL: " + url);
  }
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    const auto url = parse_url(request.url);
    httplib::Client client(url.scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);
    auto res = client.Post(url.path, headers, request.body, "application/json");
    if (!res) {
      throw TransportError("POST " + request.url + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

HttpResponse post_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy,
                             const std::string& secret) {
  std::string last_error;
  auto backoff = policy.initial_backoff;
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    try {
      HttpResponse res = transport.post(request);
      if (res.status >= 200 && res.status < 300) return res;
      if (res.status == 429 || res.status >= 500) {
        last_error = "HTTP " + std::to_string(res.status) + ": " + res.body;
        continue;
      }
      throw ConfigError(redact("HTTP " + std::to_string(res.status) + " from " + request.url + ": " + res.body, secret));
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError(redact("giving up on " + request.url + " after " + std::to_string(policy.max_retries + 1) +
                                  " attempts: " + last_error,
                              secret));
}

std::string read_secret_env(const std::string& var_name) {
  if (var_name.empty()) throw ConfigError("no API key environment variable configured");
  const char* value = std::getenv(var_name.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("environment variable " + var_name + " is not set");
  }
  return value;
}

}  // namespace ragfix
