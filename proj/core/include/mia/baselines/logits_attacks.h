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

#ifndef MIA_BASELINES_LOGITS_ATTACKS_H_
#define MIA_BASELINES_LOGITS_ATTACKS_H_

#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/baselines/attack_score.h"
#include "mia/core/types.h"
#include "mia/oracle/oracle.h"

namespace mia {

struct MinKConfig {
  double k_percent = 20.0;

  absl::Status Validate() const;
};

enum class ZlibVariant {
  // -P / zlib(x).
  kPerplexity,
  // -log(P) / zlib(x).
  kLogPerplexity,
};

struct ZlibConfig {
  ZlibVariant variant = ZlibVariant::kPerplexity;
};

// Log-probabilities of positions 2..n of `text` under `oracle`.
absl::StatusOr<std::vector<double>> ScoreText(Oracle& oracle,
                                              std::string_view text);

// exp(-mean log-probability over positions 2..n).
absl::StatusOr<double> Perplexity(Oracle& oracle, std::string_view text);

// Mean of the ceil(k% * count) smallest values.
double MinKMean(std::span<const double> logprobs, double k_percent);

// score = -P(x).
absl::StatusOr<AttackScore> PplScore(Oracle& target, const Sample& sample);

// score = P_ref(x) - P(x).
absl::StatusOr<AttackScore> ReferenceScore(Oracle& target, Oracle& reference,
                                           const Sample& sample);

// score = -P(x) / zlib(x), or -log P(x) / zlib(x).
absl::StatusOr<AttackScore> ZlibScore(Oracle& target, const Sample& sample,
                                      const ZlibConfig& cfg = {});

// score = mean neighbor perplexity - P(x).
absl::StatusOr<AttackScore> NeighborhoodScore(Oracle& target,
                                              const Sample& sample);

// score = mean of the lowest k% token log-probabilities.
absl::StatusOr<AttackScore> MinKScore(Oracle& target, const Sample& sample,
                                      const MinKConfig& cfg = {});

}  // namespace mia

#endif  // MIA_BASELINES_LOGITS_ATTACKS_H_
