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

#include "mia/baselines/logits_attacks.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "mia/baselines/zlib_size.h"

namespace mia {
namespace {

absl::Status Tagged(const absl::Status& status, std::string_view method,
                    const Sample& sample) {
  return absl::Status(status.code(),
                      absl::StrCat(std::string(method), " on sample \"",
                                   sample.id, "\": ", status.message()));
}

AttackScore Make(std::string_view method, const Sample& sample, double score) {
  AttackScore out;
  out.sample_id = sample.id;
  out.method = std::string(method);
  out.score = score;
  return out;
}

double MeanOf(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

absl::Status MinKConfig::Validate() const {
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("k_percent must be in (0, 100], got ", k_percent));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ScoreText(Oracle& oracle,
                                              std::string_view text) {
  auto tokens = oracle.Tokenize(text);
  if (!tokens.ok()) return tokens.status();
  auto scored = oracle.TokenLogProbs(*tokens);
  if (!scored.ok()) return scored.status();
  std::vector<double> out;
  out.reserve(scored->size());
  for (const TokenLogProb& lp : *scored) out.push_back(lp.logprob);
  return out;
}

absl::StatusOr<double> Perplexity(Oracle& oracle, std::string_view text) {
  auto logprobs = ScoreText(oracle, text);
  if (!logprobs.ok()) return logprobs.status();
  return std::exp(-MeanOf(*logprobs));
}

double MinKMean(std::span<const double> logprobs, double k_percent) {
  std::vector<size_t> order(logprobs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return logprobs[a] < logprobs[b];
  });
  const double want =
      std::ceil(k_percent / 100.0 * static_cast<double>(order.size()) - 1e-9);
  const size_t k = std::clamp<size_t>(static_cast<size_t>(std::max(want, 1.0)),
                                      1, order.size());
  std::vector<bool> chosen(logprobs.size(), false);
  for (size_t i = 0; i < k; ++i) chosen[order[i]] = true;
  double sum = 0.0;
  for (size_t i = 0; i < logprobs.size(); ++i) {
    if (chosen[i]) sum += logprobs[i];
  }
  return sum / static_cast<double>(k);
}

absl::StatusOr<AttackScore> PplScore(Oracle& target, const Sample& sample) {
  auto ppl = Perplexity(target, sample.text);
  if (!ppl.ok()) return Tagged(ppl.status(), kAttackPpl, sample);
  AttackScore out = Make(kAttackPpl, sample, -*ppl);
  out.diagnostics["perplexity"] = *ppl;
  return out;
}

absl::StatusOr<AttackScore> ReferenceScore(Oracle& target, Oracle& reference,
                                           const Sample& sample) {
  auto ppl = Perplexity(target, sample.text);
  if (!ppl.ok()) return Tagged(ppl.status(), kAttackReference, sample);
  auto ref = Perplexity(reference, sample.text);
  if (!ref.ok()) return Tagged(ref.status(), kAttackReference, sample);
  AttackScore out = Make(kAttackReference, sample, *ref - *ppl);
  out.diagnostics["perplexity"] = *ppl;
  out.diagnostics["reference_perplexity"] = *ref;
  return out;
}

absl::StatusOr<AttackScore> ZlibScore(Oracle& target, const Sample& sample,
                                      const ZlibConfig& cfg) {
  auto ppl = Perplexity(target, sample.text);
  if (!ppl.ok()) return Tagged(ppl.status(), kAttackZlib, sample);
  const double size = static_cast<double>(ZlibCompressedSize(sample.text));
  const double numerator =
      cfg.variant == ZlibVariant::kPerplexity ? *ppl : std::log(*ppl);
  AttackScore out = Make(kAttackZlib, sample, -numerator / size);
  out.diagnostics["perplexity"] = *ppl;
  out.diagnostics["zlib_bytes"] = size;
  return out;
}

absl::StatusOr<AttackScore> NeighborhoodScore(Oracle& target,
                                              const Sample& sample) {
  if (!sample.neighbors.has_value() || sample.neighbors->empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "neighborhood attack needs neighbors for sample \"", sample.id, "\""));
  }
  auto ppl = Perplexity(target, sample.text);
  if (!ppl.ok()) return Tagged(ppl.status(), kAttackNeighborhood, sample);
  double sum = 0.0;
  for (const std::string& neighbor : *sample.neighbors) {
    auto p = Perplexity(target, neighbor);
    if (!p.ok()) return Tagged(p.status(), kAttackNeighborhood, sample);
    sum += *p;
  }
  const double mean = sum / static_cast<double>(sample.neighbors->size());
  AttackScore out = Make(kAttackNeighborhood, sample, mean - *ppl);
  out.diagnostics["perplexity"] = *ppl;
  out.diagnostics["neighbor_mean_perplexity"] = mean;
  return out;
}

absl::StatusOr<AttackScore> MinKScore(Oracle& target, const Sample& sample,
                                      const MinKConfig& cfg) {
  if (auto st = cfg.Validate(); !st.ok()) return st;
  auto logprobs = ScoreText(target, sample.text);
  if (!logprobs.ok()) return Tagged(logprobs.status(), kAttackMinK, sample);
  return Make(kAttackMinK, sample, MinKMean(*logprobs, cfg.k_percent));
}

}  // namespace mia
