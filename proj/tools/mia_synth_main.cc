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

// Writes the offline synthetic membership benchmark and a ready-to-run
// configuration into a directory.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "glog/logging.h"
#include "mia/synthetic/benchmark.h"

namespace {

constexpr char kConfig[] = R"(dataset:
  path: synthetic.jsonl
oracles:
  target:
    transport: mock_ngram
    capability: logits
    model_path: target.ngram.json
  surrogate:
    transport: mock_ngram
    capability: logits
    model_path: surrogate.ngram.json
  reference:
    transport: mock_ngram
    capability: logits
    model_path: surrogate.ngram.json
embedding:
  transport: mock_hash
  dimension: 64
attacks:
  - petal
  - ppl
  - reference
  - zlib
  - neighborhood
  - name: mink
    k_percent: 20
  - name: robustness-rs
    prefix_fraction: 0.5
  - name: robustness-ws
    prefix_fraction: 0.5
  - name: robustness-bt
    prefix_fraction: 0.5
metrics:
  fpr_targets: [0.01, 0.05]
cache_dir: cache
output_dir: out
seed: 7
parallelism: 1
sweep:
  attack: petal
  axis: granularity
  values: [1, 2, 4, 8, 16]
)";

}  // namespace

int main(int argc, char** argv) {
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;

  CLI::App app{"Generate the synthetic membership benchmark"};
  std::string out_dir;
  mia::SyntheticOptions options;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--seed", options.seed, "Generator seed");
  app.add_option("--members", options.members, "Member texts");
  app.add_option("--nonmembers", options.nonmembers, "Non-member texts");
  app.add_option("--text-words", options.text_words, "Words per text");
  CLI11_PARSE(app, argc, argv);

  auto benchmark = mia::BuildSyntheticBenchmark(options);
  if (!benchmark.ok()) {
    std::cerr << "error: " << benchmark.status().message() << "\n";
    return 2;
  }
  if (auto st = mia::WriteSyntheticBenchmark(*benchmark, out_dir); !st.ok()) {
    std::cerr << "error: " << st.message() << "\n";
    return 1;
  }
  std::ofstream config(std::string(out_dir) + "/config.yaml");
  config << kConfig;
  if (!config) {
    std::cerr << "error: cannot write config.yaml\n";
    return 1;
  }
  std::cout << "wrote " << benchmark->dataset.samples.size() << " samples to "
            << out_dir << "\n";
  return 0;
}
