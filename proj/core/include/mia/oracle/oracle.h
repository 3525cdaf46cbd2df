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

#ifndef MIA_ORACLE_ORACLE_H_
#define MIA_ORACLE_ORACLE_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/core/cache.h"
#include "mia/core/http_client.h"
#include "mia/oracle/decoding.h"
#include "mia/oracle/ngram_model.h"

namespace mia {

struct TokenLogProb {
  Token token;
  double logprob = 0.0;  // natural log, <= 0

  friend bool operator==(const TokenLogProb&, const TokenLogProb&) = default;
};

// Label-only oracles can only generate. Logits oracles can also score text.
enum class Capability { kLabelOnly, kLogits };

enum class Transport { kHttp, kMockNGram };

std::string_view CapabilityName(Capability capability);
absl::StatusOr<Capability> ParseCapability(std::string_view name);
std::string_view TransportName(Transport transport);
absl::StatusOr<Transport> ParseTransport(std::string_view name);

struct OracleConfig {
  std::string identity;
  Capability capability = Capability::kLogits;
  Transport transport = Transport::kMockNGram;

  // Http transport.
  std::optional<std::string> endpoint_url;
  std::optional<std::string> api_key_env_var;
  std::chrono::milliseconds request_timeout{60000};
  int max_parallel_requests = 4;
  RetryPolicy retry;
  // Whether the backend honors contrastive-search parameters.
  bool supports_contrastive = false;

  // MockNGram transport.
  std::shared_ptr<const NGramModel> mock_model;

  absl::Status Validate() const;
};

// Request counters. "calls" are API-level invocations; "backend" counts the
// invocations that were not served from the cache; "network_requests" counts
// HTTP attempts (always zero for in-process backends).
struct OracleStats {
  uint64_t generate_calls = 0;
  uint64_t generate_backend = 0;
  uint64_t score_calls = 0;
  uint64_t score_backend = 0;
  uint64_t network_requests = 0;
};

// A language model behind a black-box interface.
//
// All methods are safe to call concurrently. Generation and scoring responses
// go through the attached ResponseCache (if any), keyed by
// (identity, request kind, prefix, decoding, max new tokens).
class Oracle {
 public:
  virtual ~Oracle() = default;

  const std::string& identity() const { return config_.identity; }
  Capability capability() const { return config_.capability; }
  const OracleConfig& config() const { return config_; }

  virtual absl::StatusOr<TokenSequence> Tokenize(std::string_view text) = 0;
  virtual std::string Detokenize(std::span<const Token> tokens) const = 0;

  // Whether generation with this strategy can be served at all.
  virtual absl::Status CheckDecodingSupported(
      const DecodingConfig& decoding) const;

  // Between 0 and max_new_tokens tokens continuing `prefix`.
  absl::StatusOr<TokenSequence> GenerateContinuation(
      std::span<const Token> prefix, int max_new_tokens,
      const DecodingConfig& decoding);

  // One entry per position 2..n: log P(t_i | t_1..t_{i-1}).
  absl::StatusOr<std::vector<TokenLogProb>> TokenLogProbs(
      std::span<const Token> tokens);

  void AttachCache(ResponseCache* cache) { cache_ = cache; }
  // When set, a cache miss on a remote backend is an error.
  void set_offline(bool offline) { offline_ = offline; }

  OracleStats stats() const;

 protected:
  explicit Oracle(OracleConfig config) : config_(std::move(config)) {}

  virtual absl::StatusOr<TokenSequence> DoGenerate(
      std::span<const Token> prefix, int max_new_tokens,
      const DecodingConfig& decoding) = 0;
  virtual absl::StatusOr<std::vector<TokenLogProb>> DoScore(
      std::span<const Token> tokens) = 0;

  virtual bool is_remote() const { return false; }
  virtual uint64_t network_requests() const { return 0; }
  // Identity used in cache keys; may add a content fingerprint.
  virtual std::string cache_identity() const { return config_.identity; }

  // Looks `key` up in the cache, otherwise runs `fetch` and stores its
  // result. Honors offline mode for remote backends.
  absl::StatusOr<std::string> CachedFetch(
      const CacheKey& key,
      const std::function<absl::StatusOr<std::string>()>& fetch);

  OracleConfig config_;

 private:
  ResponseCache* cache_ = nullptr;
  bool offline_ = false;
  std::atomic<uint64_t> generate_calls_{0};
  std::atomic<uint64_t> generate_backend_{0};
  std::atomic<uint64_t> score_calls_{0};
  std::atomic<uint64_t> score_backend_{0};
};

// Builds the backend named by `config.transport`.
absl::StatusOr<std::unique_ptr<Oracle>> MakeOracle(const OracleConfig& config);

// Fits an n-gram model and wraps it in a Logits-capable mock oracle config.
absl::StatusOr<OracleConfig> FitMock(std::span<const std::string> corpus,
                                     int order,
                                     std::span<const std::string> vocab = {},
                                     double add_k = 1.0,
                                     std::string identity = "");

// Serializes a token list unambiguously (JSON array) for cache keys.
std::string EncodeTokens(std::span<const Token> tokens);

}  // namespace mia

#endif  // MIA_ORACLE_ORACLE_H_
