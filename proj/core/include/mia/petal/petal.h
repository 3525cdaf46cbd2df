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

#ifndef MIA_PETAL_PETAL_H_
#define MIA_PETAL_PETAL_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/baselines/attack_score.h"
#include "mia/core/types.h"
#include "mia/embed/provider.h"
#include "mia/oracle/decoding.h"
#include "mia/oracle/oracle.h"
#include "mia/petal/regression.h"

namespace mia {

struct PetalConfig {
  // Fraction of the n-1 scorable positions to query, counted from the end.
  double budget_fraction = 1.0;
  // Tokens generated and compared per target query.
  int granularity = 1;
  DecodingConfig decoding;
  // Per-position weights (granularity 1 only); uniform when absent.
  std::optional<std::vector<double>> weights;
  RegressionParams regression_fallback = kDefaultRegressionFallback;

  absl::Status Validate() const;
};

// Similarity of one target block and its token count.
struct BlockSim {
  double similarity = 0.0;
  int token_count = 1;
  // 1-based position of the first token in the block.
  int start_position = 0;
};

struct PerplexityResult {
  // exp(log_value); may be +inf for extreme estimates.
  double value = 1.0;
  double log_value = 0.0;
  // Estimated joint log-probability of each block.
  std::vector<double> per_position_logprobs;
};

struct PetalResult {
  AttackScore score;
  std::vector<SimProbPair> pairs;
  RegressionParams params;
  std::vector<BlockSim> target_sims;
  PerplexityResult perplexity;
};

// One (similarity, log-probability) pair per surrogate position 2..n: the
// surrogate's one-token continuation of t_1..t_{i-1} compared with t_i, and
// log P(t_i | t_1..t_{i-1}) under the surrogate.
absl::StatusOr<std::vector<SimProbPair>> CollectSurrogatePairs(
    Oracle& surrogate, EmbeddingProvider& provider, const Sample& sample,
    const DecodingConfig& decoding);

// Number of blocks queried for an n-token sample.
int PetalQueryCount(int num_tokens, double budget_fraction, int granularity);

// Similarities for the last ceil(budget * (n-1)) positions, in consecutive
// blocks of `granularity` tokens, one target query per block.
absl::StatusOr<std::vector<BlockSim>> CollectTargetSims(
    Oracle& target, EmbeddingProvider& provider, const Sample& sample,
    const PetalConfig& cfg);

// Approximated perplexity: each block's log-probability is estimated as
// params.Predict(similarity) and the estimates are averaged per token, or
// with the given per-block weights.
absl::StatusOr<PerplexityResult> ApproxPerplexity(
    std::span<const BlockSim> sims, const RegressionParams& params,
    const std::optional<std::vector<double>>& weights = std::nullopt);

// Full attack. score = -log(approximated perplexity).
absl::StatusOr<PetalResult> PetalScore(const Sample& sample, Oracle& target,
                                       Oracle& surrogate,
                                       EmbeddingProvider& provider,
                                       const PetalConfig& cfg);

}  // namespace mia

#endif  // MIA_PETAL_PETAL_H_
