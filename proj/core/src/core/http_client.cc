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

#include "mia/core/http_client.h"

#include <cstdlib>
#include <thread>

#include "absl/strings/str_cat.h"
#include "glog/logging.h"
#include "httplib.h"

namespace mia {
namespace {

absl::Status StatusFromHttpCode(int code, std::string_view body) {
  std::string message =
      absl::StrCat("HTTP ", code, ": ", std::string(body.substr(0, 512)));
  switch (code) {
    case 400:
    case 422:
      return absl::InvalidArgumentError(message);
    case 401:
      return absl::UnauthenticatedError(message);
    case 403:
      return absl::PermissionDeniedError(message);
    case 404:
      return absl::NotFoundError(message);
    case 429:
      return absl::ResourceExhaustedError(message);
    default:
      if (code >= 500) return absl::UnavailableError(message);
      return absl::FailedPreconditionError(message);
  }
}

// RAII slot in the in-flight request pool.
class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~InFlightSlot() { sem_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

HttpJsonClient::HttpJsonClient(HttpClientOptions options)
    : options_(std::move(options)),
      in_flight_(std::max(1, options_.max_parallel_requests)) {
  const std::string& url = options_.base_url;
  const size_t scheme_end = url.find("://");
  const size_t host_start =
      scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) {
    scheme_host_port_ = url;
  } else {
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
}

absl::StatusOr<std::string> HttpJsonClient::PostJson(std::string_view path,
                                                     const std::string& body) {
  const std::string full_path = absl::StrCat(path_prefix_, std::string(path));
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", absl::StrCat("Bearer ", options_.api_key));
  }
  const int attempts = std::max(1, options_.retry.max_attempts);
  auto backoff = options_.retry.initial_backoff;
  absl::Status last_error = absl::UnknownError("no attempt made");
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    {
      InFlightSlot slot(in_flight_);
      httplib::Client client(scheme_host_port_);
      const auto timeout_us =
          std::chrono::duration_cast<std::chrono::microseconds>(
              options_.timeout);
      client.set_connection_timeout(timeout_us);
      client.set_read_timeout(timeout_us);
      client.set_write_timeout(timeout_us);
      ++requests_sent_;
      auto result = client.Post(full_path, headers, body, "application/json");
      if (!result) {
        last_error = absl::UnavailableError(
            absl::StrCat("POST ", full_path,
                         " failed: ", httplib::to_string(result.error())));
      } else if (result->status >= 200 && result->status < 300) {
        return std::move(result->body);
      } else {
        last_error = StatusFromHttpCode(result->status, result->body);
        if (result->status < 500) return last_error;
      }
    }
    if (attempt < attempts) {
      LOG(WARNING) << "attempt " << attempt << "/" << attempts << " for "
                   << full_path << " failed (" << last_error
                   << "); retrying in " << backoff.count() << " ms";
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<int64_t>(static_cast<double>(backoff.count()) *
                               options_.retry.backoff_multiplier));
    }
  }
  return absl::UnavailableError(absl::StrCat(
      "giving up after ", attempts, " attempts: ", last_error.message()));
}

std::string ApiKeyFromEnv(std::string_view env_var) {
  if (env_var.empty()) return "";
  const char* value = std::getenv(std::string(env_var).c_str());
  return value == nullptr ? "" : std::string(value);
}

}  // namespace mia
