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

#include "mia/oracle/oracle.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"
#include "mia/oracle/http_oracle.h"
#include "mia/oracle/mock_oracle.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::json;

std::string ShortPrefix(std::span<const Token> tokens) {
  std::string text;
  for (const Token& t : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += t;
    if (text.size() > 48) {
      text.resize(48);
      text += "...";
      break;
    }
  }
  return text;
}

}  // namespace

std::string_view CapabilityName(Capability capability) {
  return capability == Capability::kLogits ? "logits" : "label_only";
}

absl::StatusOr<Capability> ParseCapability(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "logits") return Capability::kLogits;
  if (lower == "label_only" || lower == "label-only" || lower == "labelonly") {
    return Capability::kLabelOnly;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown oracle capability \"", std::string(name), "\""));
}

std::string_view TransportName(Transport transport) {
  return transport == Transport::kHttp ? "http" : "mock_ngram";
}

absl::StatusOr<Transport> ParseTransport(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "http") return Transport::kHttp;
  if (lower == "mock_ngram" || lower == "mock-ngram" || lower == "mock") {
    return Transport::kMockNGram;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown oracle transport \"", std::string(name), "\""));
}

absl::Status OracleConfig::Validate() const {
  if (max_parallel_requests < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle \"", identity, "\": max_parallel_requests must be positive"));
  }
  switch (transport) {
    case Transport::kHttp:
      if (!endpoint_url.has_value() || endpoint_url->empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "oracle \"", identity, "\": http transport needs endpoint_url"));
      }
      if (identity.empty()) {
        return absl::InvalidArgumentError(
            "http oracle needs an identity (model name)");
      }
      return absl::OkStatus();
    case Transport::kMockNGram:
      if (mock_model == nullptr) {
        return absl::InvalidArgumentError(absl::StrCat(
            "oracle \"", identity, "\": mock transport needs a fitted model"));
      }
      return absl::OkStatus();
  }
  return absl::InvalidArgumentError("unknown transport");
}

std::string EncodeTokens(std::span<const Token> tokens) {
  json arr = json::array();
  for (const Token& t : tokens) arr.push_back(t);
  return arr.dump();
}

absl::Status Oracle::CheckDecodingSupported(
    const DecodingConfig& decoding) const {
  return decoding.Validate();
}

absl::StatusOr<std::string> Oracle::CachedFetch(
    const CacheKey& key,
    const std::function<absl::StatusOr<std::string>()>& fetch) {
  if (cache_ != nullptr) {
    if (auto hit = cache_->Get(key); hit.has_value()) {
      return std::move(hit->bytes);
    }
  }
  if (offline_ && is_remote()) {
    return absl::FailedPreconditionError(
        absl::StrCat("offline mode: no cached ", key.request_kind,
                     " response for oracle \"", identity(), "\""));
  }
  auto bytes = fetch();
  if (!bytes.ok()) return bytes.status();
  if (cache_ != nullptr) {
    // A failed write only costs a future refetch.
    (void)cache_->Put(key, *bytes);
  }
  return bytes;
}

absl::StatusOr<TokenSequence> Oracle::GenerateContinuation(
    std::span<const Token> prefix, int max_new_tokens,
    const DecodingConfig& decoding) {
  ++generate_calls_;
  if (prefix.empty()) {
    return absl::InvalidArgumentError("generation prefix is empty");
  }
  if (max_new_tokens < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("max_new_tokens must be positive, got ", max_new_tokens));
  }
  if (auto st = CheckDecodingSupported(decoding); !st.ok()) return st;

  auto run = [&]() -> absl::StatusOr<TokenSequence> {
    ++generate_backend_;
    auto out = DoGenerate(prefix, max_new_tokens, decoding);
    if (!out.ok()) {
      return absl::Status(
          out.status().code(),
          absl::StrCat("generation for prefix \"", ShortPrefix(prefix),
                       "\" on \"", identity(), "\": ", out.status().message()));
    }
    if (out->size() > static_cast<size_t>(max_new_tokens)) {
      out->resize(max_new_tokens);
    }
    return out;
  };

  if (!decoding.is_deterministic()) return run();

  const CacheKey key{cache_identity(), "generate", EncodeTokens(prefix),
                     decoding.CanonicalString(), max_new_tokens};
  auto bytes = CachedFetch(key, [&]() -> absl::StatusOr<std::string> {
    auto tokens = run();
    if (!tokens.ok()) return tokens.status();
    return EncodeTokens(*tokens);
  });
  if (!bytes.ok()) return bytes.status();
  json arr = json::parse(*bytes, nullptr, /*allow_exceptions=*/false);
  if (!arr.is_array()) {
    return absl::DataLossError("cached generation is not a JSON array");
  }
  TokenSequence tokens;
  for (const json& t : arr) {
    if (!t.is_string()) {
      return absl::DataLossError("cached generation has a non-string token");
    }
    tokens.push_back(t.get<std::string>());
  }
  return tokens;
}

absl::StatusOr<std::vector<TokenLogProb>> Oracle::TokenLogProbs(
    std::span<const Token> tokens) {
  ++score_calls_;
  if (capability() != Capability::kLogits) {
    return absl::FailedPreconditionError(absl::StrCat(
        "oracle \"", identity(),
        "\" is label-only and cannot return token log-probabilities"));
  }
  if (tokens.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("scoring needs at least 2 tokens, got ", tokens.size()));
  }
  const CacheKey key{cache_identity(), "score", EncodeTokens(tokens), "", 0};
  auto bytes = CachedFetch(key, [&]() -> absl::StatusOr<std::string> {
    ++score_backend_;
    auto scored = DoScore(tokens);
    if (!scored.ok()) return scored.status();
    if (scored->size() != tokens.size() - 1) {
      return absl::DataLossError(absl::StrCat(
          "oracle \"", identity(), "\" returned ", scored->size(),
          " log-probabilities for ", tokens.size() - 1, " positions"));
    }
    json arr = json::array();
    for (const TokenLogProb& lp : *scored) {
      if (!std::isfinite(lp.logprob)) {
        return absl::DataLossError(
            absl::StrCat("oracle \"", identity(),
                         "\" returned a non-finite log-probability"));
      }
      arr.push_back(json::array({lp.token, std::min(0.0, lp.logprob)}));
    }
    return arr.dump();
  });
  if (!bytes.ok()) return bytes.status();
  json arr = json::parse(*bytes, nullptr, /*allow_exceptions=*/false);
  if (!arr.is_array() || arr.size() != tokens.size() - 1) {
    return absl::DataLossError("cached scoring response is malformed");
  }
  std::vector<TokenLogProb> out;
  out.reserve(arr.size());
  for (const json& entry : arr) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number()) {
      return absl::DataLossError("cached scoring entry is malformed");
    }
    out.push_back({entry[0].get<std::string>(), entry[1].get<double>()});
  }
  return out;
}

OracleStats Oracle::stats() const {
  return OracleStats{generate_calls_.load(), generate_backend_.load(),
                     score_calls_.load(), score_backend_.load(),
                     network_requests()};
}

absl::StatusOr<std::unique_ptr<Oracle>> MakeOracle(const OracleConfig& config) {
  if (auto st = config.Validate(); !st.ok()) return st;
  switch (config.transport) {
    case Transport::kMockNGram:
      return std::unique_ptr<Oracle>(new MockNGramOracle(config));
    case Transport::kHttp:
      return std::unique_ptr<Oracle>(new HttpOracle(config));
  }
  return absl::InvalidArgumentError("unknown transport");
}

absl::StatusOr<OracleConfig> FitMock(std::span<const std::string> corpus,
                                     int order,
                                     std::span<const std::string> vocab,
                                     double add_k, std::string identity) {
  auto model = NGramModel::Fit(corpus, order, vocab, add_k);
  if (!model.ok()) return model.status();
  OracleConfig config;
  config.identity = identity.empty() ? absl::StrCat("mock-ngram-", order)
                                     : std::move(identity);
  config.capability = Capability::kLogits;
  config.transport = Transport::kMockNGram;
  config.mock_model = std::make_shared<const NGramModel>(*std::move(model));
  return config;
}

}  // namespace mia
