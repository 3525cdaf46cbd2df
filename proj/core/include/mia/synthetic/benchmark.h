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

#ifndef MIA_SYNTHETIC_BENCHMARK_H_
#define MIA_SYNTHETIC_BENCHMARK_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/core/types.h"
#include "mia/oracle/ngram_model.h"

namespace mia {

// A seeded first-order Markov "language" over pseudo-words, used to build an
// offline membership benchmark with known ground truth.
struct SyntheticOptions {
  uint64_t seed = 20240917;
  int vocab_size = 2000;
  // Distinct successors per word, weighted by rank^-zipf_exponent.
  int successors = 20;
  double zipf_exponent = 1.1;
  int text_words = 32;
  int members = 200;
  int nonmembers = 200;

  // Memorizing target: trained on the members plus background texts.
  int target_order = 3;
  double target_add_k = 0.01;
  int background_texts = 400;

  // Surrogate (and reference): an independent corpus from the same language.
  int surrogate_order = 2;
  double surrogate_add_k = 0.01;
  int surrogate_texts = 2000;

  // Well-generalized target: every member once among a large corpus.
  int generalized_order = 2;
  double generalized_add_k = 1.0;
  int generalized_texts = 20000;

  int neighbors_per_sample = 5;
  int augmentations_per_sample = 3;
};

struct SyntheticBenchmark {
  Dataset dataset;
  std::vector<std::string> vocabulary;
  std::shared_ptr<const NGramModel> memorizing_target;
  std::shared_ptr<const NGramModel> generalized_target;
  std::shared_ptr<const NGramModel> surrogate;
};

absl::StatusOr<SyntheticBenchmark> BuildSyntheticBenchmark(
    const SyntheticOptions& options = {});

// File names used by WriteSyntheticBenchmark.
inline constexpr char kSyntheticDatasetFile[] = "synthetic.jsonl";
inline constexpr char kSyntheticTargetFile[] = "target.ngram.json";
inline constexpr char kSyntheticGeneralizedFile[] = "generalized.ngram.json";
inline constexpr char kSyntheticSurrogateFile[] = "surrogate.ngram.json";

// Writes the dataset and the three models into `dir` (created if needed).
absl::Status WriteSyntheticBenchmark(const SyntheticBenchmark& benchmark,
                                     const std::filesystem::path& dir);

}  // namespace mia

#endif  // MIA_SYNTHETIC_BENCHMARK_H_
