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

#ifndef MIA_ORACLE_HTTP_ORACLE_H_
#define MIA_ORACLE_HTTP_ORACLE_H_

#include <atomic>
#include <memory>
#include <string>

#include "mia/core/http_client.h"
#include "mia/oracle/oracle.h"

namespace mia {

// OpenAI-compatible completions backend.
//
//   generate: POST {endpoint}/v1/completions
//             {"model", "prompt", "max_tokens", "temperature": 0}  (greedy)
//             {..., "temperature": 1, "top_p": p, "seed": s}      (nucleus)
//             {..., "top_k": k, "penalty_alpha": alpha}           (contrastive)
//   score:    POST {endpoint}/v1/completions
//             {"model", "prompt", "max_tokens": 0, "echo": true,
//              "logprobs": 0, "temperature": 0}
//             reading choices[0].logprobs.{tokens, token_logprobs}.
//
// Tokens keep their leading whitespace and detokenization is plain
// concatenation. Logits-capable oracles tokenize through the echo request
// (whose response is cached and reused for scoring); label-only oracles, or
// a failing echo request, fall back to whitespace tokenization.
class HttpOracle : public Oracle {
 public:
  explicit HttpOracle(OracleConfig config);

  absl::StatusOr<TokenSequence> Tokenize(std::string_view text) override;
  std::string Detokenize(std::span<const Token> tokens) const override;
  absl::Status CheckDecodingSupported(
      const DecodingConfig& decoding) const override;

 protected:
  absl::StatusOr<TokenSequence> DoGenerate(
      std::span<const Token> prefix, int max_new_tokens,
      const DecodingConfig& decoding) override;
  absl::StatusOr<std::vector<TokenLogProb>> DoScore(
      std::span<const Token> tokens) override;
  bool is_remote() const override { return true; }
  uint64_t network_requests() const override {
    return client_->requests_sent();
  }

 private:
  struct EchoResult {
    std::vector<std::string> tokens;
    std::vector<std::optional<double>> logprobs;
  };
  absl::StatusOr<EchoResult> Echo(const std::string& text);

  std::unique_ptr<HttpJsonClient> client_;
  std::atomic<bool> warned_fallback_{false};
};

}  // namespace mia

#endif  // MIA_ORACLE_HTTP_ORACLE_H_
