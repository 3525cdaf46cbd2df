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

#ifndef MIA_EMBED_PROVIDER_H_
#define MIA_EMBED_PROVIDER_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/core/cache.h"
#include "mia/core/http_client.h"
#include "mia/oracle/ngram_model.h"

namespace mia {

class Oracle;

enum class EmbeddingTransport { kHttp, kMockHash, kProbeAffine };

std::string_view EmbeddingTransportName(EmbeddingTransport transport);
absl::StatusOr<EmbeddingTransport> ParseEmbeddingTransport(
    std::string_view name);

struct EmbeddingProviderConfig {
  std::string identity;
  EmbeddingTransport transport = EmbeddingTransport::kMockHash;
  int dimension = 64;

  // Http.
  std::optional<std::string> endpoint_url;
  std::optional<std::string> api_key_env_var;
  std::chrono::milliseconds request_timeout{60000};
  int max_parallel_requests = 4;
  RetryPolicy retry;

  // MockHash.
  uint64_t seed = 0;

  // ProbeAffine: similarity = (log p - intercept) / slope under the oracle
  // named in the similarity context, or `probe_oracle` when none is given.
  // Probed oracles must be Logits-capable and outlive the provider.
  double probe_slope = 1.0;
  double probe_intercept = 0.0;
  Oracle* probe_oracle = nullptr;

  absl::Status Validate() const;
};

// Where a compared span came from. Embedding providers ignore it; the
// ProbeAffine fixture provider uses it to look up the true log-probability of
// `actual_tokens` after `prefix` under `oracle`.
struct SimilarityContext {
  std::span<const Token> prefix;
  std::span<const Token> actual_tokens;
  // The oracle that produced the generated span, if known.
  Oracle* oracle = nullptr;
};

enum class SimilarityKind { kToken, kText };

// Maps strings to unit-norm vectors and compares them by dot product.
//
// Embeddings are memoized in memory per provider. Providers that talk to a
// remote service additionally use the attached ResponseCache.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  const std::string& identity() const { return config_.identity; }
  const EmbeddingProviderConfig& config() const { return config_; }

  // Dot product of the unit embeddings of `actual` and `generated`, in
  // [-1, 1]. Empty input (no words) scores 0 and logs a warning.
  virtual absl::StatusOr<double> Similarity(SimilarityKind kind,
                                            std::string_view actual,
                                            std::string_view generated,
                                            const SimilarityContext* context);

  // Unit-norm embedding. All-whitespace text maps to the zero vector.
  absl::StatusOr<std::vector<double>> Embed(std::string_view text);

  void AttachCache(ResponseCache* cache) { cache_ = cache; }
  void set_offline(bool offline) { offline_ = offline; }

  uint64_t backend_requests() const { return backend_requests_.load(); }
  virtual uint64_t network_requests() const { return 0; }

 protected:
  explicit EmbeddingProvider(EmbeddingProviderConfig config)
      : config_(std::move(config)) {}

  // Raw embedding of a non-empty text (normalized by the caller).
  virtual absl::StatusOr<std::vector<double>> DoEmbed(
      std::string_view text) = 0;
  virtual bool is_remote() const { return false; }

  EmbeddingProviderConfig config_;

 private:
  ResponseCache* cache_ = nullptr;
  bool offline_ = false;
  std::atomic<uint64_t> backend_requests_{0};
  std::mutex memo_mu_;
  absl::flat_hash_map<std::string, std::vector<double>> memo_;
};

absl::StatusOr<std::unique_ptr<EmbeddingProvider>> MakeEmbeddingProvider(
    const EmbeddingProviderConfig& config);

// Token-level semantic similarity.
absl::StatusOr<double> TokenSimilarity(
    EmbeddingProvider& provider, std::string_view a, std::string_view b,
    const SimilarityContext* context = nullptr);

// Text-level semantic similarity.
absl::StatusOr<double> TextSimilarity(
    EmbeddingProvider& provider, std::string_view a, std::string_view b,
    const SimilarityContext* context = nullptr);

// Scales `v` to unit L2 norm in place; the zero vector is left unchanged.
void NormalizeInPlace(std::vector<double>& v);

}  // namespace mia

#endif  // MIA_EMBED_PROVIDER_H_
