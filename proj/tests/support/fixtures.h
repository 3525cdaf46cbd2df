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

#ifndef MIA_TESTS_SUPPORT_FIXTURES_H_
#define MIA_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mia/oracle/ngram_model.h"
#include "mia/oracle/oracle.h"

namespace mia::testing {

std::shared_ptr<const NGramModel> FitModel(
    const std::vector<std::string>& corpus, int order, double add_k,
    const std::vector<std::string>& extra_vocab = {});

std::unique_ptr<Oracle> MockOracle(std::shared_ptr<const NGramModel> model,
                                   std::string identity,
                                   Capability capability = Capability::kLogits);

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace mia::testing

#endif  // MIA_TESTS_SUPPORT_FIXTURES_H_
