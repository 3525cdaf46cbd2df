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

#include "support/fake_openai_server.h"

#include <chrono>

#include "httplib.h"
#include "mia/core/text.h"
#include "nlohmann/json.hpp"

namespace mia::testing {
namespace {

using json = nlohmann::json;

std::vector<Token> Words(const std::vector<std::string>& pieces) {
  std::vector<Token> out;
  for (const std::string& p : pieces) out.emplace_back(StripAscii(p));
  return out;
}

}  // namespace

FakeOpenAiServer::FakeOpenAiServer(std::shared_ptr<const NGramModel> model,
                                   uint64_t embedding_seed)
    : model_(std::move(model)), server_(std::make_unique<httplib::Server>()) {
  EmbeddingProviderConfig emb;
  emb.identity = "fake-embedder";
  emb.seed = embedding_seed;
  embedder_ = std::make_unique<MockHashProvider>(emb);

  auto gate = [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    {
      std::lock_guard<std::mutex> lock(mu_);
      last_authorization_ = req.get_header_value("Authorization");
    }
    if (fail_remaining_.load() > 0 && fail_remaining_.fetch_sub(1) > 0) {
      res.status = fail_status_.load();
      res.set_content(R"({"error":"injected"})", "application/json");
      return false;
    }
    return true;
  };

  server_->Post("/v1/completions", [this, gate](const httplib::Request& req,
                                                httplib::Response& res) {
    if (!gate(req, res)) return;
    ++completions_;
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("prompt")) {
      res.status = 400;
      return;
    }
    const std::string prompt = body["prompt"].get<std::string>();
    const std::vector<std::string> pieces = SplitWordsKeepSpacing(prompt);
    const std::vector<Token> words = Words(pieces);
    json choice;
    if (body.value("echo", false)) {
      json lps = json::array();
      for (size_t i = 0; i < words.size(); ++i) {
        if (i == 0) {
          lps.push_back(nullptr);
          continue;
        }
        auto lp = model_->LogProb(std::span(words).first(i), words[i]);
        lps.push_back(lp.ok() ? json(*lp) : json(nullptr));
      }
      choice["text"] = prompt;
      choice["logprobs"] = {{"tokens", pieces}, {"token_logprobs", lps}};
    } else {
      DecodingConfig decoding;
      if (body.value("temperature", 0.0) > 0.0) {
        decoding = DecodingConfig::Nucleus(body.value("top_p", 1.0),
                                           body.value("seed", uint64_t{0}));
      }
      const int max_tokens = body.value("max_tokens", 16);
      std::string text;
      for (const Token& t : model_->Generate(words, max_tokens, decoding)) {
        text += " " + t;
      }
      choice["text"] = text;
    }
    json response = {{"object", "text_completion"},
                     {"choices", json::array({choice})}};
    res.set_content(response.dump(), "application/json");
  });

  server_->Post("/v1/embeddings", [this, gate](const httplib::Request& req,
                                               httplib::Response& res) {
    if (!gate(req, res)) return;
    ++embeddings_;
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("input")) {
      res.status = 400;
      return;
    }
    auto v = embedder_->Embed(body["input"].get<std::string>());
    json response = {
        {"object", "list"},
        {"data",
         json::array({{{"object", "embedding"},
                       {"index", 0},
                       {"embedding", v.ok() ? *v : std::vector<double>{}}}})}};
    res.set_content(response.dump(), "application/json");
  });

  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  while (!server_->is_running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

FakeOpenAiServer::~FakeOpenAiServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string FakeOpenAiServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

void FakeOpenAiServer::FailNext(int n, int status) {
  fail_status_ = status;
  fail_remaining_ = n;
}

std::string FakeOpenAiServer::last_authorization() const {
  std::lock_guard<std::mutex> lock(mu_);
  return last_authorization_;
}

}  // namespace mia::testing
