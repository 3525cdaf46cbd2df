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

#include "mia/synthetic/benchmark.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "mia/core/dataset.h"
#include "mia/core/text.h"

namespace mia {
namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                        "n", "p", "r", "s", "t", "v", "z"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u"};

class Language {
 public:
  Language(const SyntheticOptions& options, std::mt19937_64& rng)
      : options_(options) {
    std::set<std::string> seen;
    while (static_cast<int>(words_.size()) < options.vocab_size) {
      const int syllables = 2 + static_cast<int>(rng() % 2);
      std::string w;
      for (int s = 0; s < syllables; ++s) {
        w += kOnsets[rng() % std::size(kOnsets)];
        w += kVowels[rng() % std::size(kVowels)];
      }
      if (seen.insert(w).second) words_.push_back(w);
    }
    std::vector<double> weights(options.successors);
    for (int r = 0; r < options.successors; ++r) {
      weights[r] = std::pow(r + 1.0, -options.zipf_exponent);
    }
    successors_.resize(words_.size());
    for (auto& next : successors_) {
      absl::flat_hash_set<int> chosen;
      while (static_cast<int>(next.size()) < options.successors) {
        const int id = static_cast<int>(rng() % words_.size());
        if (chosen.insert(id).second) next.push_back(id);
      }
    }
    double total = 0.0;
    for (double w : weights) cdf_.push_back(total += w);
    for (double& c : cdf_) c /= total;
  }

  std::vector<int> Walk(std::mt19937_64& rng) {
    std::vector<int> ids;
    ids.push_back(static_cast<int>(rng() % words_.size()));
    while (static_cast<int>(ids.size()) < options_.text_words) {
      const double u = UnitInterval(rng());
      const auto rank = std::min<size_t>(
          std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin(),
          cdf_.size() - 1);
      ids.push_back(successors_[ids.back()][rank]);
    }
    return ids;
  }

  std::string Render(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(words_[id]);
    return JoinWords(out);
  }

  // Overwrites `count` random positions with random vocabulary words.
  std::string Substitute(std::vector<int> ids, int count,
                         std::mt19937_64& rng) const {
    for (int c = 0; c < count; ++c) {
      ids[rng() % ids.size()] = static_cast<int>(rng() % words_.size());
    }
    return Render(ids);
  }

  // Swaps `count` random adjacent pairs and substitutes one word.
  std::string Rephrase(std::vector<int> ids, int count,
                       std::mt19937_64& rng) const {
    for (int c = 0; c < count; ++c) {
      const size_t i = rng() % (ids.size() - 1);
      std::swap(ids[i], ids[i + 1]);
    }
    return Substitute(std::move(ids), 1, rng);
  }

  const std::vector<std::string>& words() const { return words_; }

 private:
  const SyntheticOptions& options_;
  std::vector<std::string> words_;
  std::vector<std::vector<int>> successors_;
  // Cumulative successor-rank probabilities.
  std::vector<double> cdf_;
};

absl::Status CheckOptions(const SyntheticOptions& o) {
  if (o.vocab_size < 2 || o.successors < 1 || o.successors > o.vocab_size ||
      o.text_words < 4 || o.members < 1 || o.nonmembers < 1 ||
      o.neighbors_per_sample < 0 || o.augmentations_per_sample < 0) {
    return absl::InvalidArgumentError("invalid synthetic benchmark options");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SyntheticBenchmark> BuildSyntheticBenchmark(
    const SyntheticOptions& options) {
  if (auto st = CheckOptions(options); !st.ok()) return st;
  std::mt19937_64 rng(options.seed);
  Language language(options, rng);

  // Unique texts across every corpus so that non-members are truly unseen.
  absl::flat_hash_set<std::string> used;
  auto fresh = [&](std::vector<int>* ids_out) {
    while (true) {
      std::vector<int> ids = language.Walk(rng);
      std::string text = language.Render(ids);
      if (used.insert(text).second) {
        if (ids_out != nullptr) *ids_out = std::move(ids);
        return text;
      }
    }
  };
  auto corpus = [&](int n) {
    std::vector<std::string> texts;
    texts.reserve(n);
    for (int i = 0; i < n; ++i) texts.push_back(fresh(nullptr));
    return texts;
  };

  SyntheticBenchmark out;
  out.vocabulary = language.words();
  out.dataset.name = "synthetic";
  std::vector<std::string> member_texts;
  const int total = options.members + options.nonmembers;
  for (int i = 0; i < total; ++i) {
    const bool member = i < options.members;
    std::vector<int> ids;
    Sample sample;
    sample.text = fresh(&ids);
    sample.id = absl::StrCat(member ? "m" : "n", i);
    sample.label =
        member ? MembershipLabel::kMember : MembershipLabel::kNonMember;
    if (options.neighbors_per_sample > 0) {
      std::vector<std::string> neighbors;
      for (int j = 0; j < options.neighbors_per_sample; ++j) {
        neighbors.push_back(language.Substitute(ids, 2, rng));
      }
      sample.neighbors = std::move(neighbors);
    }
    if (options.augmentations_per_sample > 0) {
      const int swaps = std::max(1, options.text_words / 10);
      for (int j = 0; j < options.augmentations_per_sample; ++j) {
        sample.augmented_inputs["ws"].push_back(language.Substitute(
            ids, std::max(1, options.text_words * 15 / 100), rng));
        sample.augmented_inputs["bt"].push_back(
            language.Rephrase(ids, swaps, rng));
      }
    }
    if (member) member_texts.push_back(sample.text);
    out.dataset.samples.push_back(std::move(sample));
  }
  // Interleave labels so that order carries no signal.
  std::vector<Sample>& samples = out.dataset.samples;
  for (size_t i = samples.size(); i > 1; --i) {
    std::swap(samples[i - 1], samples[rng() % i]);
  }

  std::vector<std::string> target_corpus = member_texts;
  for (std::string& t : corpus(options.background_texts)) {
    target_corpus.push_back(std::move(t));
  }
  std::vector<std::string> generalized_corpus = member_texts;
  for (std::string& t : corpus(options.generalized_texts)) {
    generalized_corpus.push_back(std::move(t));
  }
  const std::vector<std::string> surrogate_corpus =
      corpus(options.surrogate_texts);

  auto fit =
      [&](const std::vector<std::string>& texts, int order,
          double add_k) -> absl::StatusOr<std::shared_ptr<const NGramModel>> {
    auto model = NGramModel::Fit(texts, order, out.vocabulary, add_k);
    if (!model.ok()) return model.status();
    return std::make_shared<const NGramModel>(*std::move(model));
  };
  auto target = fit(target_corpus, options.target_order, options.target_add_k);
  if (!target.ok()) return target.status();
  auto generalized = fit(generalized_corpus, options.generalized_order,
                         options.generalized_add_k);
  if (!generalized.ok()) return generalized.status();
  auto surrogate =
      fit(surrogate_corpus, options.surrogate_order, options.surrogate_add_k);
  if (!surrogate.ok()) return surrogate.status();
  out.memorizing_target = *std::move(target);
  out.generalized_target = *std::move(generalized);
  out.surrogate = *std::move(surrogate);
  return out;
}

absl::Status WriteSyntheticBenchmark(const SyntheticBenchmark& benchmark,
                                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  if (auto st = SaveDataset(benchmark.dataset, dir / kSyntheticDatasetFile);
      !st.ok()) {
    return st;
  }
  if (auto st = benchmark.memorizing_target->Save(dir / kSyntheticTargetFile);
      !st.ok()) {
    return st;
  }
  if (auto st =
          benchmark.generalized_target->Save(dir / kSyntheticGeneralizedFile);
      !st.ok()) {
    return st;
  }
  return benchmark.surrogate->Save(dir / kSyntheticSurrogateFile);
}

}  // namespace mia
