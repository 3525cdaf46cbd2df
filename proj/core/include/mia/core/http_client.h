//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MIA_CORE_HTTP_CLIENT_H_
#define MIA_CORE_HTTP_CLIENT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <semaphore>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace mia {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_multiplier = 2.0;
};

struct HttpClientOptions {
  // scheme://host[:port][/path-prefix]; request paths are appended to it.
  std::string base_url;
  // Sent as "Authorization: Bearer <api_key>" when non-empty.
  std::string api_key;
  std::chrono::milliseconds timeout{60000};
  int max_parallel_requests = 4;
  RetryPolicy retry;
};

// Minimal JSON-over-HTTP(S) POST client.
//
// Server errors (5xx), timeouts and connection failures are retried with
// exponential backoff up to `retry.max_attempts` total attempts. Any 4xx
// response fails immediately. At most `max_parallel_requests` requests are
// in flight at once across all threads using this client.
class HttpJsonClient {
 public:
  explicit HttpJsonClient(HttpClientOptions options);

  HttpJsonClient(const HttpJsonClient&) = delete;
  HttpJsonClient& operator=(const HttpJsonClient&) = delete;

  // Returns the response body of a 2xx reply.
  absl::StatusOr<std::string> PostJson(std::string_view path,
                                       const std::string& body);

  // Number of HTTP attempts made, including retries.
  uint64_t requests_sent() const { return requests_sent_.load(); }

  const HttpClientOptions& options() const { return options_; }

 private:
  HttpClientOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::counting_semaphore<> in_flight_;
  std::atomic<uint64_t> requests_sent_{0};
};

// Reads an API key from the named environment variable. An empty name or an
// unset variable yields an empty key.
std::string ApiKeyFromEnv(std::string_view env_var);

}  // namespace mia

#endif  // MIA_CORE_HTTP_CLIENT_H_
