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

#include "support/fixtures.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include "glog/logging.h"

namespace mia::testing {

std::shared_ptr<const NGramModel> FitModel(
    const std::vector<std::string>& corpus, int order, double add_k,
    const std::vector<std::string>& extra_vocab) {
  auto model = NGramModel::Fit(corpus, order, extra_vocab, add_k);
  CHECK(model.ok()) << model.status();
  return std::make_shared<const NGramModel>(*std::move(model));
}

std::unique_ptr<Oracle> MockOracle(std::shared_ptr<const NGramModel> model,
                                   std::string identity,
                                   Capability capability) {
  OracleConfig config;
  config.identity = std::move(identity);
  config.capability = capability;
  config.transport = Transport::kMockNGram;
  config.mock_model = std::move(model);
  auto oracle = MakeOracle(config);
  CHECK(oracle.ok()) << oracle.status();
  return *std::move(oracle);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("mia-test-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
}

}  // namespace mia::testing
