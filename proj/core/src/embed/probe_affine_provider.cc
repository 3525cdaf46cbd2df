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

#include "mia/embed/probe_affine_provider.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/oracle/oracle.h"

namespace mia {

ProbeAffineProvider::ProbeAffineProvider(EmbeddingProviderConfig config)
    : EmbeddingProvider(std::move(config)) {
  if (config_.identity.empty()) config_.identity = "probe-affine";
}

absl::StatusOr<double> ProbeAffineProvider::Similarity(
    SimilarityKind kind, std::string_view actual, std::string_view generated,
    const SimilarityContext* context) {
  (void)kind;
  (void)actual;
  (void)generated;
  if (context == nullptr || context->prefix.empty() ||
      context->actual_tokens.empty()) {
    return absl::FailedPreconditionError(
        "probe-affine similarity needs the prefix and actual tokens");
  }
  TokenSequence full(context->prefix.begin(), context->prefix.end());
  full.insert(full.end(), context->actual_tokens.begin(),
              context->actual_tokens.end());
  Oracle* oracle =
      context->oracle != nullptr ? context->oracle : config_.probe_oracle;
  if (oracle == nullptr) {
    return absl::FailedPreconditionError(
        "probe-affine similarity has no oracle to probe");
  }
  auto scored = oracle->TokenLogProbs(full);
  if (!scored.ok()) return scored.status();
  double logprob = 0.0;
  const size_t m = context->actual_tokens.size();
  for (size_t i = scored->size() - m; i < scored->size(); ++i) {
    logprob += (*scored)[i].logprob;
  }
  const double sim = (logprob - config_.probe_intercept) / config_.probe_slope;
  if (!(std::abs(sim) <= 1.0 + 1e-9)) {
    return absl::OutOfRangeError(
        absl::StrCat("probe-affine similarity ", sim,
                     " falls outside [-1, 1]; choose a larger slope"));
  }
  return std::clamp(sim, -1.0, 1.0);
}

absl::StatusOr<std::vector<double>> ProbeAffineProvider::DoEmbed(
    std::string_view) {
  return absl::UnimplementedError(
      "probe-affine provider does not produce embeddings");
}

}  // namespace mia
