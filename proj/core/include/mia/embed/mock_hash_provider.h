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

#ifndef MIA_EMBED_MOCK_HASH_PROVIDER_H_
#define MIA_EMBED_MOCK_HASH_PROVIDER_H_

#include <string_view>
#include <vector>

#include "mia/embed/provider.h"

namespace mia {

// Deterministic offline embeddings. Each word gets a pseudo-random unit
// vector keyed by its bytes and the provider seed; a text embeds as the
// normalized sum of its word vectors. Identical words therefore have
// similarity 1 and unrelated words are close to orthogonal.
class MockHashProvider : public EmbeddingProvider {
 public:
  explicit MockHashProvider(EmbeddingProviderConfig config);

  // Unit vector for one word.
  std::vector<double> WordVector(std::string_view word) const;

 protected:
  absl::StatusOr<std::vector<double>> DoEmbed(std::string_view text) override;
};

}  // namespace mia

#endif  // MIA_EMBED_MOCK_HASH_PROVIDER_H_
