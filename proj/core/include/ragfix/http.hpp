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

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ragfix {

struct HttpRequest {
  std::string url;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  std::chrono::milliseconds timeout{30'000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Minimal POST-only transport so providers can be tested against in-process fakes.
/// Implementations throw TransportError when no HTTP response was obtained.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport();

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
};

/// POSTs with exponential backoff. Transport failures, 429 and 5xx are retried;
/// any other non-2xx status throws ConfigError carrying the response body.
/// After the budget is spent throws TransportError. `secret` is scrubbed from
/// every error message.
HttpResponse post_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy,
                             const std::string& secret = {});

/// Reads a secret from the environment; throws ConfigError if unset or empty.
std::string read_secret_env(const std::string& var_name);

}  // namespace ragfix
