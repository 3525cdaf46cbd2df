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

#include "mia/petal/petal.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"

namespace mia {
namespace {

absl::Status Tagged(const absl::Status& status, std::string_view where) {
  return absl::Status(status.code(),
                      absl::StrCat(std::string(where), ": ", status.message()));
}

// Space-joined tokens with their own surrounding whitespace removed.
std::string JoinBlock(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    const std::string_view stripped = StripAscii(t);
    if (stripped.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(stripped);
  }
  return out;
}

}  // namespace

absl::Status PetalConfig::Validate() const {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "budget_fraction must be in (0, 1], got ", budget_fraction));
  }
  if (granularity < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("granularity must be positive, got ", granularity));
  }
  if (weights.has_value()) {
    if (granularity != 1) {
      return absl::InvalidArgumentError(
          "explicit weights require granularity 1");
    }
    double sum = 0.0;
    for (double w : *weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        return absl::InvalidArgumentError("weights must be nonnegative");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      return absl::InvalidArgumentError(
          absl::StrCat("weights must sum to 1, got ", sum));
    }
  }
  return decoding.Validate();
}

absl::StatusOr<std::vector<SimProbPair>> CollectSurrogatePairs(
    Oracle& surrogate, EmbeddingProvider& provider, const Sample& sample,
    const DecodingConfig& decoding) {
  auto tokens = surrogate.Tokenize(sample.text);
  if (!tokens.ok()) return Tagged(tokens.status(), "surrogate tokenization");
  const size_t n = tokens->size();
  if (n < 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample needs at least 3 surrogate tokens, has ", n));
  }
  auto scored = surrogate.TokenLogProbs(*tokens);
  if (!scored.ok()) return Tagged(scored.status(), "surrogate scoring");

  std::vector<SimProbPair> pairs;
  pairs.reserve(n - 1);
  const std::span<const Token> all(*tokens);
  for (size_t i = 2; i <= n; ++i) {
    const auto prefix = all.first(i - 1);
    const std::string where = absl::StrCat("surrogate position ", i);
    auto gen = surrogate.GenerateContinuation(prefix, 1, decoding);
    if (!gen.ok()) return Tagged(gen.status(), where);
    const std::string generated = gen->empty() ? "" : JoinBlock(*gen);
    const SimilarityContext ctx{prefix, all.subspan(i - 1, 1), &surrogate};
    auto sim = TokenSimilarity(provider, JoinBlock(all.subspan(i - 1, 1)),
                               generated, &ctx);
    if (!sim.ok()) return Tagged(sim.status(), where);
    pairs.push_back({*sim, (*scored)[i - 2].logprob});
  }
  return pairs;
}

int PetalQueryCount(int num_tokens, double budget_fraction, int granularity) {
  if (num_tokens < 2 || granularity < 1) return 0;
  const int positions = num_tokens - 1;
  int m = static_cast<int>(std::ceil(budget_fraction * positions - 1e-9));
  m = std::clamp(m, 1, positions);
  return (m + granularity - 1) / granularity;
}

absl::StatusOr<std::vector<BlockSim>> CollectTargetSims(
    Oracle& target, EmbeddingProvider& provider, const Sample& sample,
    const PetalConfig& cfg) {
  if (auto st = cfg.Validate(); !st.ok()) return st;
  auto tokens = target.Tokenize(sample.text);
  if (!tokens.ok()) return Tagged(tokens.status(), "target tokenization");
  const int n = static_cast<int>(tokens->size());
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample needs at least 2 target tokens, has ", n));
  }
  const int positions = n - 1;
  const int m = std::clamp(
      static_cast<int>(std::ceil(cfg.budget_fraction * positions - 1e-9)), 1,
      positions);

  std::vector<BlockSim> sims;
  const std::span<const Token> all(*tokens);
  for (int start = n - m + 1; start <= n; start += cfg.granularity) {
    const int size = std::min(cfg.granularity, n - start + 1);
    const auto prefix = all.first(start - 1);
    const auto actual = all.subspan(start - 1, size);
    const std::string where = absl::StrCat("target block at position ", start);
    auto gen = target.GenerateContinuation(prefix, size, cfg.decoding);
    if (!gen.ok()) return Tagged(gen.status(), where);
    const SimilarityContext ctx{prefix, actual, &target};
    auto sim = size == 1 ? TokenSimilarity(provider, JoinBlock(actual),
                                           JoinBlock(*gen), &ctx)
                         : TextSimilarity(provider, JoinBlock(actual),
                                          JoinBlock(*gen), &ctx);
    if (!sim.ok()) return Tagged(sim.status(), where);
    sims.push_back({*sim, size, start});
  }
  return sims;
}

absl::StatusOr<PerplexityResult> ApproxPerplexity(
    std::span<const BlockSim> sims, const RegressionParams& params,
    const std::optional<std::vector<double>>& weights) {
  if (sims.empty()) {
    return absl::InvalidArgumentError("no similarities to aggregate");
  }
  PerplexityResult result;
  result.per_position_logprobs.reserve(sims.size());
  for (const BlockSim& b : sims) {
    result.per_position_logprobs.push_back(params.Predict(b.similarity));
  }

  double mean_logprob = 0.0;
  if (weights.has_value()) {
    if (weights->size() != sims.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("got ", weights->size(), " weights for ", sims.size(),
                       " scored positions"));
    }
    double total = 0.0;
    for (size_t i = 0; i < sims.size(); ++i) {
      if (sims[i].token_count != 1) {
        return absl::InvalidArgumentError(
            "explicit weights require granularity 1");
      }
      if (!((*weights)[i] >= 0.0)) {
        return absl::InvalidArgumentError("weights must be nonnegative");
      }
      total += (*weights)[i];
    }
    if (!(total > 0.0)) {
      return absl::InvalidArgumentError("weights sum to zero");
    }
    for (size_t i = 0; i < sims.size(); ++i) {
      mean_logprob += (*weights)[i] / total * result.per_position_logprobs[i];
    }
  } else {
    double tokens = 0.0;
    for (size_t i = 0; i < sims.size(); ++i) {
      mean_logprob += result.per_position_logprobs[i];
      tokens += sims[i].token_count;
    }
    mean_logprob /= tokens;
  }
  result.log_value = -mean_logprob;
  result.value = std::exp(result.log_value);
  return result;
}

absl::StatusOr<PetalResult> PetalScore(const Sample& sample, Oracle& target,
                                       Oracle& surrogate,
                                       EmbeddingProvider& provider,
                                       const PetalConfig& cfg) {
  const std::string tag = absl::StrCat("petal on sample \"", sample.id, "\"");
  if (auto st = cfg.Validate(); !st.ok()) return Tagged(st, tag);
  PetalResult result;
  auto pairs = CollectSurrogatePairs(surrogate, provider, sample, cfg.decoding);
  if (!pairs.ok()) return Tagged(pairs.status(), tag);
  result.pairs = *std::move(pairs);
  result.params = FitRegression(result.pairs, cfg.regression_fallback);

  auto sims = CollectTargetSims(target, provider, sample, cfg);
  if (!sims.ok()) return Tagged(sims.status(), tag);
  result.target_sims = *std::move(sims);

  auto ppl = ApproxPerplexity(result.target_sims, result.params, cfg.weights);
  if (!ppl.ok()) return Tagged(ppl.status(), tag);
  result.perplexity = *std::move(ppl);

  result.score.sample_id = sample.id;
  result.score.method = std::string(kAttackPetal);
  result.score.score = -result.perplexity.log_value;
  result.score.diagnostics = {
      {"slope", result.params.slope},
      {"intercept", result.params.intercept},
      {"approx_log_perplexity", result.perplexity.log_value},
      {"target_queries", static_cast<double>(result.target_sims.size())},
  };
  return result;
}

}  // namespace mia
