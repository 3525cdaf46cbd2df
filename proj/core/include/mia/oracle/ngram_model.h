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

#ifndef MIA_ORACLE_NGRAM_MODEL_H_
#define MIA_ORACLE_NGRAM_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/oracle/decoding.h"

namespace mia {

using Token = std::string;
using TokenSequence = std::vector<Token>;

// Whitespace-token n-gram model with additive (add-k) smoothing.
//
// P(t | h) = (c(h, t) + k) / (c(h) + k |V|), where h is the last
// min(order - 1, |history|) tokens and V = corpus tokens plus any extra
// vocabulary. Each corpus text is counted independently; the first
// order - 2 positions of a text use the shorter available context.
//
// With k = 0 the model is the maximum-likelihood estimate; a context that was
// never seen then falls back to the uniform 1/|V|.
//
// The vocabulary is kept in byte-lexicographic order, so "smallest id" and
// "lexicographically smallest token" coincide for tie-breaking.
class NGramModel {
 public:
  static absl::StatusOr<NGramModel> Fit(
      std::span<const std::string> corpus, int order,
      std::span<const std::string> extra_vocab = {}, double add_k = 1.0);

  static absl::StatusOr<NGramModel> FromJson(std::string_view json_text);
  static absl::StatusOr<NGramModel> Load(const std::filesystem::path& path);

  // Deterministic: identical models serialize to identical bytes.
  std::string ToJson() const;
  absl::Status Save(const std::filesystem::path& path) const;

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  const std::vector<Token>& vocab() const { return vocab_; }
  size_t vocab_size() const { return vocab_.size(); }

  // Natural-log probability of `token` following `history`. A token outside
  // the vocabulary gets the unseen-continuation mass k / (c(h) + k|V|).
  // Returns OutOfRange for a zero-probability event (only possible at k = 0).
  absl::StatusOr<double> LogProb(std::span<const Token> history,
                                 std::string_view token) const;

  // P(v | history) for every vocabulary entry, in vocabulary order.
  std::vector<double> Distribution(std::span<const Token> history) const;

  // Most probable next token; ties go to the lexicographically smallest.
  const Token& GreedyNext(std::span<const Token> history) const;

  // Generates `max_new_tokens` tokens. Nucleus sampling draws from the
  // smallest top-probability set whose mass reaches p using a generator
  // seeded by (seed, history). Contrastive search scores the top-k candidates
  // by (1 - alpha) p(v) - alpha * max_sim(v, history) with one-hot token
  // representations, so the degeneration penalty is 1 for a repeated token
  // and 0 otherwise.
  TokenSequence Generate(std::span<const Token> history, int max_new_tokens,
                         const DecodingConfig& decoding) const;

  // Stable content hash, usable as part of an oracle identity.
  uint64_t Fingerprint() const;

 private:
  struct ContextStats {
    uint64_t total = 0;
    // (token id, count), sorted by token id.
    std::vector<std::pair<int32_t, uint32_t>> next;
    int32_t best_id = -1;
  };

  NGramModel() = default;

  std::optional<int32_t> TokenId(std::string_view token) const;
  // Nullptr when the context was never observed (or contains OOV tokens).
  const ContextStats* FindContext(std::span<const Token> history) const;
  static std::string ContextKey(std::span<const int32_t> ids);
  void Finalize();

  int order_ = 2;
  double add_k_ = 1.0;
  std::vector<Token> vocab_;
  absl::flat_hash_map<std::string, int32_t> index_;
  absl::flat_hash_map<std::string, ContextStats> contexts_;
};

}  // namespace mia

#endif  // MIA_ORACLE_NGRAM_MODEL_H_
