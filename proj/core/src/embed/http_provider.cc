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

#include "mia/embed/http_provider.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::json;

HttpClientOptions ClientOptions(const EmbeddingProviderConfig& config) {
  HttpClientOptions options;
  options.base_url = config.endpoint_url.value_or("");
  options.api_key = ApiKeyFromEnv(config.api_key_env_var.value_or(""));
  options.timeout = config.request_timeout;
  options.max_parallel_requests = config.max_parallel_requests;
  options.retry = config.retry;
  return options;
}

}  // namespace

HttpEmbeddingProvider::HttpEmbeddingProvider(EmbeddingProviderConfig config)
    : EmbeddingProvider(std::move(config)),
      client_(std::make_unique<HttpJsonClient>(ClientOptions(config_))) {}

absl::StatusOr<std::vector<double>> HttpEmbeddingProvider::DoEmbed(
    std::string_view text) {
  const json request = {{"model", identity()}, {"input", std::string(text)}};
  auto body = client_->PostJson("/v1/embeddings", request.dump());
  if (!body.ok()) return body.status();
  const json response = json::parse(*body, nullptr, /*allow_exceptions=*/false);
  std::vector<double> vec;
  try {
    vec = response.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return absl::DataLossError(
        absl::StrCat("malformed embeddings response: ", e.what()));
  }
  if (vec.empty()) {
    return absl::DataLossError("embeddings response has an empty vector");
  }
  for (double x : vec) {
    if (!std::isfinite(x)) {
      return absl::DataLossError("embeddings response has non-finite values");
    }
  }
  return vec;
}

}  // namespace mia
