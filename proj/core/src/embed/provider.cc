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

#include "mia/embed/provider.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "glog/logging.h"
#include "mia/core/text.h"
#include "mia/embed/http_provider.h"
#include "mia/embed/mock_hash_provider.h"
#include "mia/embed/probe_affine_provider.h"
#include "nlohmann/json.hpp"

namespace mia {

using json = nlohmann::json;

std::string_view EmbeddingTransportName(EmbeddingTransport transport) {
  switch (transport) {
    case EmbeddingTransport::kHttp:
      return "http";
    case EmbeddingTransport::kMockHash:
      return "mock_hash";
    case EmbeddingTransport::kProbeAffine:
      return "probe_affine";
  }
  return "mock_hash";
}

absl::StatusOr<EmbeddingTransport> ParseEmbeddingTransport(
    std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "http") return EmbeddingTransport::kHttp;
  if (lower == "mock_hash" || lower == "mock-hash" || lower == "mockhash") {
    return EmbeddingTransport::kMockHash;
  }
  if (lower == "probe_affine" || lower == "probe-affine" ||
      lower == "probeaffine") {
    return EmbeddingTransport::kProbeAffine;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown embedding transport \"", std::string(name), "\""));
}

absl::Status EmbeddingProviderConfig::Validate() const {
  switch (transport) {
    case EmbeddingTransport::kHttp:
      if (!endpoint_url.has_value() || endpoint_url->empty()) {
        return absl::InvalidArgumentError(
            "http embedding provider needs endpoint_url");
      }
      if (identity.empty()) {
        return absl::InvalidArgumentError(
            "http embedding provider needs an identity (model name)");
      }
      return absl::OkStatus();
    case EmbeddingTransport::kMockHash:
      if (dimension < 1) {
        return absl::InvalidArgumentError(
            "mock embedding dimension must be positive");
      }
      return absl::OkStatus();
    case EmbeddingTransport::kProbeAffine:
      if (!(std::isfinite(probe_slope) && probe_slope != 0.0 &&
            std::isfinite(probe_intercept))) {
        return absl::InvalidArgumentError(
            "probe-affine slope must be finite and nonzero");
      }
      return absl::OkStatus();
  }
  return absl::InvalidArgumentError("unknown embedding transport");
}

void NormalizeInPlace(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq <= 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

absl::StatusOr<std::vector<double>> EmbeddingProvider::Embed(
    std::string_view text) {
  if (CountWords(text) == 0) return std::vector<double>{};
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    if (auto it = memo_.find(absl::string_view(text.data(), text.size()));
        it != memo_.end())
      return it->second;
  }
  std::vector<double> vec;
  const CacheKey key{config_.identity, "embedding", std::string(text), "", 0};
  bool have = false;
  if (is_remote() && cache_ != nullptr) {
    if (auto hit = cache_->Get(key); hit.has_value()) {
      json arr = json::parse(hit->bytes, nullptr, /*allow_exceptions=*/false);
      if (arr.is_array()) {
        vec = arr.get<std::vector<double>>();
        have = true;
      }
    }
  }
  if (!have) {
    if (offline_ && is_remote()) {
      return absl::FailedPreconditionError(
          absl::StrCat("offline mode: no cached embedding for provider \"",
                       config_.identity, "\""));
    }
    ++backend_requests_;
    auto raw = DoEmbed(text);
    if (!raw.ok()) return raw.status();
    vec = *std::move(raw);
    NormalizeInPlace(vec);
    if (is_remote() && cache_ != nullptr) {
      (void)cache_->Put(key, json(vec).dump());
    }
  }
  std::lock_guard<std::mutex> lock(memo_mu_);
  memo_.emplace(std::string(text), vec);
  return vec;
}

absl::StatusOr<double> EmbeddingProvider::Similarity(
    SimilarityKind kind, std::string_view actual, std::string_view generated,
    const SimilarityContext* context) {
  (void)kind;
  (void)context;
  if (CountWords(actual) == 0 || CountWords(generated) == 0) {
    LOG_EVERY_N(WARNING, 100)
        << "similarity with an empty string scored as 0 (provider \""
        << config_.identity << "\")";
    return 0.0;
  }
  auto a = Embed(actual);
  if (!a.ok()) return a.status();
  auto b = Embed(generated);
  if (!b.ok()) return b.status();
  if (a->size() != b->size()) {
    return absl::DataLossError(absl::StrCat(
        "embedding dimensions differ: ", a->size(), " vs ", b->size()));
  }
  double dot = 0.0;
  for (size_t i = 0; i < a->size(); ++i) dot += (*a)[i] * (*b)[i];
  return std::clamp(dot, -1.0, 1.0);
}

absl::StatusOr<std::unique_ptr<EmbeddingProvider>> MakeEmbeddingProvider(
    const EmbeddingProviderConfig& config) {
  if (auto st = config.Validate(); !st.ok()) return st;
  switch (config.transport) {
    case EmbeddingTransport::kMockHash:
      return std::unique_ptr<EmbeddingProvider>(new MockHashProvider(config));
    case EmbeddingTransport::kHttp:
      return std::unique_ptr<EmbeddingProvider>(
          new HttpEmbeddingProvider(config));
    case EmbeddingTransport::kProbeAffine:
      return std::unique_ptr<EmbeddingProvider>(
          new ProbeAffineProvider(config));
  }
  return absl::InvalidArgumentError("unknown embedding transport");
}

absl::StatusOr<double> TokenSimilarity(EmbeddingProvider& provider,
                                       std::string_view a, std::string_view b,
                                       const SimilarityContext* context) {
  return provider.Similarity(SimilarityKind::kToken, a, b, context);
}

absl::StatusOr<double> TextSimilarity(EmbeddingProvider& provider,
                                      std::string_view a, std::string_view b,
                                      const SimilarityContext* context) {
  return provider.Similarity(SimilarityKind::kText, a, b, context);
}

}  // namespace mia
