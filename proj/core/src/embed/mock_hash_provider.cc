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

#include "mia/embed/mock_hash_provider.h"

#include <random>

#include "mia/core/text.h"

namespace mia {

MockHashProvider::MockHashProvider(EmbeddingProviderConfig config)
    : EmbeddingProvider(std::move(config)) {
  if (config_.identity.empty()) config_.identity = "mock-hash";
}

std::vector<double> MockHashProvider::WordVector(std::string_view word) const {
  std::mt19937_64 rng(MixSeed(config_.seed, Fnv1a64(word)));
  std::vector<double> v(config_.dimension);
  for (double& x : v) x = 2.0 * UnitInterval(rng()) - 1.0;
  NormalizeInPlace(v);
  return v;
}

absl::StatusOr<std::vector<double>> MockHashProvider::DoEmbed(
    std::string_view text) {
  std::vector<double> sum(config_.dimension, 0.0);
  for (const std::string& word : SplitWords(text)) {
    const std::vector<double> v = WordVector(word);
    for (int i = 0; i < config_.dimension; ++i) sum[i] += v[i];
  }
  return sum;
}

}  // namespace mia
