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

#ifndef MIA_EMBED_HTTP_PROVIDER_H_
#define MIA_EMBED_HTTP_PROVIDER_H_

#include <memory>
#include <string_view>
#include <vector>

#include "mia/core/http_client.h"
#include "mia/embed/provider.h"

namespace mia {

// OpenAI-compatible `/v1/embeddings` endpoint.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(EmbeddingProviderConfig config);

  uint64_t network_requests() const override {
    return client_->requests_sent();
  }

 protected:
  absl::StatusOr<std::vector<double>> DoEmbed(std::string_view text) override;
  bool is_remote() const override { return true; }

 private:
  std::unique_ptr<HttpJsonClient> client_;
};

}  // namespace mia

#endif  // MIA_EMBED_HTTP_PROVIDER_H_
