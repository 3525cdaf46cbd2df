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

#ifndef MIA_RUNNER_CONFIG_H_
#define MIA_RUNNER_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/baselines/logits_attacks.h"
#include "mia/baselines/robustness.h"
#include "mia/embed/provider.h"
#include "mia/oracle/decoding.h"
#include "mia/oracle/oracle.h"
#include "mia/petal/petal.h"

namespace mia {

struct AttackSpec {
  // A registered attack name.
  std::string name;
  PetalConfig petal;
  MinKConfig mink;
  ZlibConfig zlib;
  RobustnessConfig robustness;
  // Robustness attacks sweep 0.1..0.9 and keep the best AUC when unset.
  bool prefix_fraction_set = false;
  // Decoding for robustness generations.
  DecodingConfig decoding;
};

enum class SweepAxis {
  kBudgetFraction,
  kGranularity,
  kPrefixFraction,
  kTextLength,
  kDecoding,
  kDirichletWeights,
};

std::string_view SweepAxisName(SweepAxis axis);
absl::StatusOr<SweepAxis> ParseSweepAxis(std::string_view name);

struct SweepSpec {
  // Attack whose configuration is varied; must be listed under `attacks`.
  std::string attack;
  SweepAxis axis = SweepAxis::kBudgetFraction;
  std::vector<double> values;
  std::vector<DecodingConfig> decodings;
  int num_draws = 100;
};

struct RunConfig {
  std::filesystem::path dataset_path;
  std::optional<int> truncate_words;

  std::optional<OracleConfig> target;
  std::optional<OracleConfig> surrogate;
  std::optional<OracleConfig> reference;

  std::optional<EmbeddingProviderConfig> embedding;
  // Oracle role ("target", "surrogate", "reference") probed by a
  // probe_affine provider when the similarity context names no oracle.
  std::optional<std::string> embedding_probe_role;

  std::vector<AttackSpec> attacks;
  std::vector<double> fpr_targets = {0.01, 0.05};

  std::filesystem::path cache_dir;
  int parallelism = 1;
  uint64_t seed = 0;
  std::filesystem::path output_dir = "mia-output";
  std::optional<SweepSpec> sweep;
};

// Parses a YAML run configuration. Relative paths (dataset, model files,
// cache and output directories) are resolved against `base_dir`. Unknown
// keys are rejected.
absl::StatusOr<RunConfig> ParseRunConfig(std::string_view yaml,
                                         const std::filesystem::path& base_dir);

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path);

}  // namespace mia

#endif  // MIA_RUNNER_CONFIG_H_
