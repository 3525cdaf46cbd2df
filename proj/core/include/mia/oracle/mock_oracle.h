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

#ifndef MIA_ORACLE_MOCK_ORACLE_H_
#define MIA_ORACLE_MOCK_ORACLE_H_

#include <string>

#include "mia/oracle/oracle.h"

namespace mia {

// In-process oracle backed by an NGramModel. Tokenization splits on
// whitespace and detokenization joins with single spaces, so the round trip
// is exact for normalized text.
class MockNGramOracle : public Oracle {
 public:
  explicit MockNGramOracle(OracleConfig config);

  absl::StatusOr<TokenSequence> Tokenize(std::string_view text) override;
  std::string Detokenize(std::span<const Token> tokens) const override;

  const NGramModel& model() const { return *config_.mock_model; }

 protected:
  absl::StatusOr<TokenSequence> DoGenerate(
      std::span<const Token> prefix, int max_new_tokens,
      const DecodingConfig& decoding) override;
  absl::StatusOr<std::vector<TokenLogProb>> DoScore(
      std::span<const Token> tokens) override;
  std::string cache_identity() const override { return cache_identity_; }

 private:
  std::string cache_identity_;
};

}  // namespace mia

#endif  // MIA_ORACLE_MOCK_ORACLE_H_
