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

#ifndef MIA_TESTS_SUPPORT_FAKE_OPENAI_SERVER_H_
#define MIA_TESTS_SUPPORT_FAKE_OPENAI_SERVER_H_

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "mia/embed/mock_hash_provider.h"
#include "mia/oracle/ngram_model.h"

namespace httplib {
class Server;
}

namespace mia::testing {

// Loopback OpenAI-compatible server backed by an NGramModel.
//
//   POST /v1/completions  echo scoring and greedy / nucleus generation
//   POST /v1/embeddings   MockHash embeddings
//
// Tokens are whitespace words carrying their leading whitespace.
class FakeOpenAiServer {
 public:
  explicit FakeOpenAiServer(std::shared_ptr<const NGramModel> model,
                            uint64_t embedding_seed = 0);
  ~FakeOpenAiServer();

  std::string url() const;
  uint64_t requests() const { return requests_.load(); }
  uint64_t completion_requests() const { return completions_.load(); }
  uint64_t embedding_requests() const { return embeddings_.load(); }

  // The next `n` requests fail with `status` before reaching the model.
  void FailNext(int n, int status);
  std::string last_authorization() const;

 private:
  std::shared_ptr<const NGramModel> model_;
  std::unique_ptr<MockHashProvider> embedder_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<uint64_t> requests_{0};
  std::atomic<uint64_t> completions_{0};
  std::atomic<uint64_t> embeddings_{0};
  std::atomic<int> fail_remaining_{0};
  std::atomic<int> fail_status_{500};
  mutable std::mutex mu_;
  std::string last_authorization_;
};

}  // namespace mia::testing

#endif  // MIA_TESTS_SUPPORT_FAKE_OPENAI_SERVER_H_
