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

#include "mia/oracle/decoding.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"

namespace mia {

std::string_view DecodingStrategyName(DecodingStrategy strategy) {
  switch (strategy) {
    case DecodingStrategy::kGreedy:
      return "greedy";
    case DecodingStrategy::kNucleus:
      return "nucleus";
    case DecodingStrategy::kContrastive:
      return "contrastive";
  }
  return "greedy";
}

absl::StatusOr<DecodingStrategy> ParseDecodingStrategy(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "greedy") return DecodingStrategy::kGreedy;
  if (lower == "nucleus" || lower == "top_p" || lower == "top-p") {
    return DecodingStrategy::kNucleus;
  }
  if (lower == "contrastive") return DecodingStrategy::kContrastive;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown decoding strategy \"", std::string(name), "\""));
}

DecodingConfig DecodingConfig::Nucleus(double p, std::optional<uint64_t> seed) {
  DecodingConfig cfg;
  cfg.strategy = DecodingStrategy::kNucleus;
  cfg.nucleus_p = p;
  cfg.seed = seed;
  return cfg;
}

DecodingConfig DecodingConfig::Contrastive(int k, double alpha) {
  DecodingConfig cfg;
  cfg.strategy = DecodingStrategy::kContrastive;
  cfg.contrastive_k = k;
  cfg.contrastive_alpha = alpha;
  return cfg;
}

absl::Status DecodingConfig::Validate() const {
  switch (strategy) {
    case DecodingStrategy::kGreedy:
      return absl::OkStatus();
    case DecodingStrategy::kNucleus:
      if (!nucleus_p.has_value()) {
        return absl::InvalidArgumentError("nucleus decoding requires p");
      }
      if (!(*nucleus_p > 0.0 && *nucleus_p <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("nucleus p must lie in (0, 1], got ", *nucleus_p));
      }
      return absl::OkStatus();
    case DecodingStrategy::kContrastive:
      if (!contrastive_k.has_value() || !contrastive_alpha.has_value()) {
        return absl::InvalidArgumentError(
            "contrastive decoding requires both k and alpha");
      }
      if (*contrastive_k < 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "contrastive k must be positive, got ", *contrastive_k));
      }
      if (!(*contrastive_alpha >= 0.0 && *contrastive_alpha <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "contrastive alpha must lie in [0, 1], got ", *contrastive_alpha));
      }
      return absl::OkStatus();
  }
  return absl::InvalidArgumentError("unknown decoding strategy");
}

std::string DecodingConfig::CanonicalString() const {
  switch (strategy) {
    case DecodingStrategy::kGreedy:
      return "greedy";
    case DecodingStrategy::kNucleus:
      return absl::StrCat(
          "nucleus;p=", FormatDouble(nucleus_p.value_or(1.0)),
          ";seed=", seed.has_value() ? std::to_string(*seed) : "none");
    case DecodingStrategy::kContrastive:
      return absl::StrCat(
          "contrastive;k=", contrastive_k.value_or(0),
          ";alpha=", FormatDouble(contrastive_alpha.value_or(0.0)));
  }
  return "greedy";
}

}  // namespace mia
