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

#ifndef MIA_BASELINES_ROBUSTNESS_H_
#define MIA_BASELINES_ROBUSTNESS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/baselines/attack_score.h"
#include "mia/core/types.h"
#include "mia/embed/provider.h"
#include "mia/oracle/decoding.h"
#include "mia/oracle/oracle.h"

namespace mia {

enum class Augmentation { kRandomSwap, kWordSubstitution, kBackTranslation };
enum class SimilarityMetric { kSemantic, kRougeL };

std::string_view AugmentationName(Augmentation augmentation);
absl::StatusOr<Augmentation> ParseAugmentation(std::string_view name);
std::string_view SimilarityMetricName(SimilarityMetric metric);
absl::StatusOr<SimilarityMetric> ParseSimilarityMetric(std::string_view name);

// Attack name ("robustness-rs" etc.) for an augmentation.
std::string_view RobustnessAttackName(Augmentation augmentation);

struct RobustnessConfig {
  double prefix_fraction = 0.5;
  Augmentation augmentation = Augmentation::kRandomSwap;
  int num_augmented = 3;
  SimilarityMetric similarity_metric = SimilarityMetric::kSemantic;
  uint64_t seed = 0;
  // Fraction of prefix words swapped by random-swap augmentation.
  double swap_fraction = 0.15;

  absl::Status Validate() const;
};

// The word split used by the attack: the first floor(fraction * W) words,
// kept within [1, W-1], and the rest.
struct PrefixSplit {
  std::string prefix;
  std::string remainder;
};
absl::StatusOr<PrefixSplit> SplitPrefix(std::string_view text,
                                        double prefix_fraction);

// The original prefix followed by `num_augmented` augmented prefixes.
absl::StatusOr<std::vector<std::string>> RobustnessPrefixes(
    const Sample& sample, const RobustnessConfig& cfg);

// Mean similarity between the ground-truth remainder and the target's
// continuation of each prefix. `provider` may be null for RougeL.
absl::StatusOr<AttackScore> RobustnessScore(Oracle& target,
                                            EmbeddingProvider* provider,
                                            const Sample& sample,
                                            const RobustnessConfig& cfg,
                                            const DecodingConfig& decoding);

}  // namespace mia

#endif  // MIA_BASELINES_ROBUSTNESS_H_
