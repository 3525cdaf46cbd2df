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

#include "mia/oracle/mock_oracle.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia/core/text.h"

namespace mia {

MockNGramOracle::MockNGramOracle(OracleConfig config)
    : Oracle(std::move(config)) {
  cache_identity_ =
      absl::StrCat(config_.identity, "#",
                   absl::StrFormat("%016x", config_.mock_model->Fingerprint()));
}

absl::StatusOr<TokenSequence> MockNGramOracle::Tokenize(std::string_view text) {
  TokenSequence tokens = SplitWords(text);
  if (tokens.empty()) {
    return absl::InvalidArgumentError("cannot tokenize empty text");
  }
  return tokens;
}

std::string MockNGramOracle::Detokenize(std::span<const Token> tokens) const {
  return JoinWords(tokens);
}

absl::StatusOr<TokenSequence> MockNGramOracle::DoGenerate(
    std::span<const Token> prefix, int max_new_tokens,
    const DecodingConfig& decoding) {
  return model().Generate(prefix, max_new_tokens, decoding);
}

absl::StatusOr<std::vector<TokenLogProb>> MockNGramOracle::DoScore(
    std::span<const Token> tokens) {
  std::vector<TokenLogProb> out;
  out.reserve(tokens.size() - 1);
  for (size_t i = 1; i < tokens.size(); ++i) {
    auto lp = model().LogProb(tokens.first(i), tokens[i]);
    if (!lp.ok()) return lp.status();
    out.push_back({tokens[i], *lp});
  }
  return out;
}

}  // namespace mia
