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

#include "mia/oracle/http_oracle.h"

#include "absl/strings/str_cat.h"
#include "glog/logging.h"
#include "mia/core/text.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::json;

constexpr std::string_view kCompletionsPath = "/v1/completions";

HttpClientOptions ClientOptions(const OracleConfig& config) {
  HttpClientOptions options;
  options.base_url = config.endpoint_url.value_or("");
  options.api_key = ApiKeyFromEnv(config.api_key_env_var.value_or(""));
  options.timeout = config.request_timeout;
  options.max_parallel_requests = config.max_parallel_requests;
  options.retry = config.retry;
  return options;
}

}  // namespace

HttpOracle::HttpOracle(OracleConfig config)
    : Oracle(std::move(config)),
      client_(std::make_unique<HttpJsonClient>(ClientOptions(config_))) {}

absl::Status HttpOracle::CheckDecodingSupported(
    const DecodingConfig& decoding) const {
  if (auto st = decoding.Validate(); !st.ok()) return st;
  if (decoding.strategy == DecodingStrategy::kContrastive &&
      !config_.supports_contrastive) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle \"", identity(),
        "\" does not advertise contrastive search; refusing to substitute "
        "another strategy"));
  }
  return absl::OkStatus();
}

absl::StatusOr<HttpOracle::EchoResult> HttpOracle::Echo(
    const std::string& text) {
  const CacheKey key{identity(), "echo", text, "", 0};
  auto body = CachedFetch(key, [&]() -> absl::StatusOr<std::string> {
    json request = {{"model", identity()}, {"prompt", text},
                    {"max_tokens", 0},     {"echo", true},
                    {"logprobs", 0},       {"temperature", 0}};
    return client_->PostJson(kCompletionsPath, request.dump());
  });
  if (!body.ok()) return body.status();
  json response = json::parse(*body, nullptr, /*allow_exceptions=*/false);
  if (response.is_discarded()) {
    return absl::DataLossError("echo response is not valid JSON");
  }
  try {
    const json& logprobs = response.at("choices").at(0).at("logprobs");
    EchoResult result;
    result.tokens = logprobs.at("tokens").get<std::vector<std::string>>();
    for (const json& lp : logprobs.at("token_logprobs")) {
      if (lp.is_null()) {
        result.logprobs.push_back(std::nullopt);
      } else {
        result.logprobs.push_back(lp.get<double>());
      }
    }
    if (result.tokens.size() != result.logprobs.size()) {
      return absl::DataLossError(
          "echo response has mismatched tokens and token_logprobs");
    }
    return result;
  } catch (const json::exception& e) {
    return absl::DataLossError(
        absl::StrCat("echo response lacks logprobs: ", e.what()));
  }
}

absl::StatusOr<TokenSequence> HttpOracle::Tokenize(std::string_view text) {
  if (CountWords(text) == 0) {
    return absl::InvalidArgumentError("cannot tokenize empty text");
  }
  if (capability() == Capability::kLogits) {
    auto echo = Echo(std::string(text));
    if (echo.ok() && !echo->tokens.empty()) return std::move(echo->tokens);
    if (!echo.ok() &&
        echo.status().code() == absl::StatusCode::kFailedPrecondition) {
      return echo.status();  // offline miss: do not guess a tokenization
    }
    LOG(WARNING) << "tokenization via echo failed for oracle \"" << identity()
                 << "\" ("
                 << (echo.ok() ? absl::DataLossError("no tokens")
                               : echo.status())
                 << "); falling back to whitespace tokenization";
  } else if (!warned_fallback_.exchange(true)) {
    LOG(WARNING) << "oracle \"" << identity()
                 << "\" has no tokenization endpoint; using whitespace "
                    "tokenization";
  }
  return SplitWordsKeepSpacing(text);
}

std::string HttpOracle::Detokenize(std::span<const Token> tokens) const {
  std::string text;
  for (const Token& t : tokens) text += t;
  return text;
}

absl::StatusOr<TokenSequence> HttpOracle::DoGenerate(
    std::span<const Token> prefix, int max_new_tokens,
    const DecodingConfig& decoding) {
  json request = {{"model", identity()},
                  {"prompt", Detokenize(prefix)},
                  {"max_tokens", max_new_tokens}};
  switch (decoding.strategy) {
    case DecodingStrategy::kGreedy:
      request["temperature"] = 0;
      break;
    case DecodingStrategy::kNucleus:
      request["temperature"] = 1.0;
      request["top_p"] = decoding.nucleus_p.value_or(1.0);
      if (decoding.seed.has_value()) request["seed"] = *decoding.seed;
      break;
    case DecodingStrategy::kContrastive:
      request["top_k"] = decoding.contrastive_k.value_or(1);
      request["penalty_alpha"] = decoding.contrastive_alpha.value_or(0.0);
      break;
  }
  auto body = client_->PostJson(kCompletionsPath, request.dump());
  if (!body.ok()) return body.status();
  json response = json::parse(*body, nullptr, /*allow_exceptions=*/false);
  std::string text;
  try {
    text = response.at("choices").at(0).at("text").get<std::string>();
  } catch (const json::exception& e) {
    return absl::DataLossError(
        absl::StrCat("completion response lacks choices[0].text: ", e.what()));
  }
  if (max_new_tokens == 1) {
    if (text.empty()) return TokenSequence{};
    return TokenSequence{std::move(text)};
  }
  return SplitWordsKeepSpacing(text);
}

absl::StatusOr<std::vector<TokenLogProb>> HttpOracle::DoScore(
    std::span<const Token> tokens) {
  auto echo = Echo(Detokenize(tokens));
  if (!echo.ok()) return echo.status();
  if (echo->tokens.size() < tokens.size()) {
    return absl::DataLossError(
        absl::StrCat("backend returned ", echo->tokens.size(),
                     " scored tokens for ", tokens.size(), " requested"));
  }
  if (echo->tokens.size() > tokens.size()) {
    return absl::DataLossError(
        absl::StrCat("backend tokenized the text into ", echo->tokens.size(),
                     " tokens, expected ", tokens.size()));
  }
  std::vector<TokenLogProb> out;
  out.reserve(tokens.size() - 1);
  for (size_t i = 1; i < tokens.size(); ++i) {
    if (!echo->logprobs[i].has_value()) {
      return absl::DataLossError(absl::StrCat(
          "backend returned no log-probability at position ", i + 1));
    }
    out.push_back({tokens[i], *echo->logprobs[i]});
  }
  return out;
}

}  // namespace mia
