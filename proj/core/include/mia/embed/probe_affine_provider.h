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

#ifndef MIA_EMBED_PROBE_AFFINE_PROVIDER_H_
#define MIA_EMBED_PROBE_AFFINE_PROVIDER_H_

#include <string_view>
#include <vector>

#include "mia/embed/provider.h"

namespace mia {

// Test fixture provider whose similarity is an exact affine image of the
// probe oracle's log-probability:
//
//   sim = (log P(actual | prefix) - intercept) / slope
//
// so that slope * sim + intercept recovers the true log-probability. The
// generated string is ignored. Requires a SimilarityContext; similarities
// outside [-1, 1] are reported as OutOfRange.
class ProbeAffineProvider : public EmbeddingProvider {
 public:
  explicit ProbeAffineProvider(EmbeddingProviderConfig config);

  absl::StatusOr<double> Similarity(SimilarityKind kind,
                                    std::string_view actual,
                                    std::string_view generated,
                                    const SimilarityContext* context) override;

 protected:
  absl::StatusOr<std::vector<double>> DoEmbed(std::string_view text) override;
};

}  // namespace mia

#endif  // MIA_EMBED_PROBE_AFFINE_PROVIDER_H_
