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

#include "mia/baselines/robustness.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"
#include "mia/embed/lexical.h"

namespace mia {
namespace {

absl::Status Tagged(const absl::Status& status, std::string_view method,
                    const Sample& sample) {
  return absl::Status(status.code(),
                      absl::StrCat(std::string(method), " on sample \"",
                                   sample.id, "\": ", status.message()));
}

size_t CutPoint(size_t words, double fraction) {
  const auto cut = static_cast<size_t>(
      std::floor(fraction * static_cast<double>(words) + 1e-9));
  return std::clamp<size_t>(cut, 1, words - 1);
}

const std::vector<std::string>* FindAugmented(const Sample& sample,
                                              std::string_view key) {
  for (const auto& [name, texts] : sample.augmented_inputs) {
    if (AsciiLower(name) == key) return &texts;
  }
  return nullptr;
}

}  // namespace

std::string_view AugmentationName(Augmentation augmentation) {
  switch (augmentation) {
    case Augmentation::kRandomSwap:
      return "rs";
    case Augmentation::kWordSubstitution:
      return "ws";
    case Augmentation::kBackTranslation:
      return "bt";
  }
  return "rs";
}

absl::StatusOr<Augmentation> ParseAugmentation(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "rs") return Augmentation::kRandomSwap;
  if (lower == "ws") return Augmentation::kWordSubstitution;
  if (lower == "bt") return Augmentation::kBackTranslation;
  return absl::InvalidArgumentError(absl::StrCat("unknown augmentation \"",
                                                 std::string(name),
                                                 "\" (expected rs, ws, bt)"));
}

std::string_view SimilarityMetricName(SimilarityMetric metric) {
  return metric == SimilarityMetric::kRougeL ? "rouge_l" : "semantic";
}

absl::StatusOr<SimilarityMetric> ParseSimilarityMetric(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "semantic") return SimilarityMetric::kSemantic;
  if (lower == "rouge_l" || lower == "rougel" || lower == "rouge-l") {
    return SimilarityMetric::kRougeL;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown similarity metric \"", std::string(name), "\""));
}

std::string_view RobustnessAttackName(Augmentation augmentation) {
  switch (augmentation) {
    case Augmentation::kRandomSwap:
      return kAttackRobustnessRs;
    case Augmentation::kWordSubstitution:
      return kAttackRobustnessWs;
    case Augmentation::kBackTranslation:
      return kAttackRobustnessBt;
  }
  return kAttackRobustnessRs;
}

absl::Status RobustnessConfig::Validate() const {
  if (!(prefix_fraction > 0.0 && prefix_fraction < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prefix_fraction must be in (0, 1), got ", prefix_fraction));
  }
  if (num_augmented < 1) {
    return absl::InvalidArgumentError("num_augmented must be positive");
  }
  if (!(swap_fraction >= 0.0 && swap_fraction <= 1.0)) {
    return absl::InvalidArgumentError("swap_fraction must be in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<PrefixSplit> SplitPrefix(std::string_view text,
                                        double prefix_fraction) {
  const std::vector<std::string> words = SplitWords(text);
  if (words.size() < 2) {
    return absl::InvalidArgumentError(
        "text needs at least two words to split into prefix and remainder");
  }
  const size_t cut = CutPoint(words.size(), prefix_fraction);
  const std::span<const std::string> all(words);
  return PrefixSplit{JoinWords(all.first(cut)), JoinWords(all.subspan(cut))};
}

absl::StatusOr<std::vector<std::string>> RobustnessPrefixes(
    const Sample& sample, const RobustnessConfig& cfg) {
  if (auto st = cfg.Validate(); !st.ok()) return st;
  auto split = SplitPrefix(sample.text, cfg.prefix_fraction);
  if (!split.ok()) return split.status();
  std::vector<std::string> prefixes = {split->prefix};
  if (cfg.augmentation == Augmentation::kRandomSwap) {
    const uint64_t base = MixSeed(cfg.seed, Fnv1a64(sample.id));
    for (int j = 0; j < cfg.num_augmented; ++j) {
      prefixes.push_back(RandomSwapPerturb(split->prefix, cfg.swap_fraction,
                                           MixSeed(base, j + 1)));
    }
    return prefixes;
  }
  const std::string key(AugmentationName(cfg.augmentation));
  const std::vector<std::string>* texts = FindAugmented(sample, key);
  if (texts == nullptr ||
      texts->size() < static_cast<size_t>(cfg.num_augmented)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample \"", sample.id, "\" needs ", cfg.num_augmented,
                     " precomputed \"", key, "\" augmentations, has ",
                     texts == nullptr ? 0 : texts->size()));
  }
  for (int j = 0; j < cfg.num_augmented; ++j) {
    const std::vector<std::string> words = SplitWords((*texts)[j]);
    if (words.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("sample \"", sample.id,
                                                     "\" has an empty \"", key,
                                                     "\" augmentation"));
    }
    const size_t cut =
        words.size() < 2 ? 1 : CutPoint(words.size(), cfg.prefix_fraction);
    prefixes.push_back(
        JoinWords(std::span<const std::string>(words).first(cut)));
  }
  return prefixes;
}

absl::StatusOr<AttackScore> RobustnessScore(Oracle& target,
                                            EmbeddingProvider* provider,
                                            const Sample& sample,
                                            const RobustnessConfig& cfg,
                                            const DecodingConfig& decoding) {
  const std::string_view method = RobustnessAttackName(cfg.augmentation);
  if (cfg.similarity_metric == SimilarityMetric::kSemantic &&
      provider == nullptr) {
    return absl::InvalidArgumentError(
        "semantic similarity needs an embedding provider");
  }
  auto prefixes = RobustnessPrefixes(sample, cfg);
  if (!prefixes.ok()) return Tagged(prefixes.status(), method, sample);
  auto split = SplitPrefix(sample.text, cfg.prefix_fraction);
  if (!split.ok()) return Tagged(split.status(), method, sample);
  auto remainder_tokens = target.Tokenize(split->remainder);
  if (!remainder_tokens.ok()) {
    return Tagged(remainder_tokens.status(), method, sample);
  }
  const int max_new = std::max<int>(1, remainder_tokens->size());

  double sum = 0.0;
  for (const std::string& prefix : *prefixes) {
    auto tokens = target.Tokenize(prefix);
    if (!tokens.ok()) return Tagged(tokens.status(), method, sample);
    auto gen = target.GenerateContinuation(*tokens, max_new, decoding);
    if (!gen.ok()) return Tagged(gen.status(), method, sample);
    const std::string generated = target.Detokenize(*gen);
    if (cfg.similarity_metric == SimilarityMetric::kRougeL) {
      sum += RougeL(generated, split->remainder);
    } else {
      auto sim = TextSimilarity(*provider, split->remainder, generated);
      if (!sim.ok()) return Tagged(sim.status(), method, sample);
      sum += *sim;
    }
  }
  AttackScore out;
  out.sample_id = sample.id;
  out.method = std::string(method);
  out.score = sum / static_cast<double>(prefixes->size());
  out.diagnostics["max_new_tokens"] = max_new;
  return out;
}

}  // namespace mia
