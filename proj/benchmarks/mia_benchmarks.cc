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

#include <memory>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "mia/baselines/logits_attacks.h"
#include "mia/core/text.h"
#include "mia/embed/provider.h"
#include "mia/metrics/metrics.h"
#include "mia/oracle/oracle.h"
#include "mia/petal/petal.h"
#include "mia/synthetic/benchmark.h"

namespace mia {
namespace {

void BM_RocAuc(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<double> scores(n);
  std::vector<MembershipLabel> labels(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = UnitInterval(rng());
    labels[i] = i % 2 ? MembershipLabel::kMember : MembershipLabel::kNonMember;
  }
  for (auto _ : state) {
    auto roc = ComputeRoc(scores, labels);
    benchmark::DoNotOptimize(Auc(*roc));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

struct Fixture {
  Fixture() {
    SyntheticOptions o;
    o.members = 50;
    o.nonmembers = 50;
    bench = *BuildSyntheticBenchmark(o);
    OracleConfig target_cfg;
    target_cfg.identity = "target";
    target_cfg.mock_model = bench.memorizing_target;
    target = *MakeOracle(target_cfg);
    OracleConfig surrogate_cfg;
    surrogate_cfg.identity = "surrogate";
    surrogate_cfg.mock_model = bench.surrogate;
    surrogate = *MakeOracle(surrogate_cfg);
    EmbeddingProviderConfig pc;
    pc.identity = "mock-hash";
    provider = *MakeEmbeddingProvider(pc);
  }
  SyntheticBenchmark bench;
  std::unique_ptr<Oracle> target;
  std::unique_ptr<Oracle> surrogate;
  std::unique_ptr<EmbeddingProvider> provider;
};

Fixture& SharedFixture() {
  static Fixture* fixture = new Fixture();
  return *fixture;
}

void BM_NGramPerplexity(benchmark::State& state) {
  Fixture& f = SharedFixture();
  size_t i = 0;
  for (auto _ : state) {
    const auto& samples = f.bench.dataset.samples;
    const Sample& s = samples[i++ % samples.size()];
    benchmark::DoNotOptimize(Perplexity(*f.target, s.text));
  }
}
BENCHMARK(BM_NGramPerplexity);

void BM_MockHashSimilarity(benchmark::State& state) {
  Fixture& f = SharedFixture();
  const auto& samples = f.bench.dataset.samples;
  size_t i = 0;
  for (auto _ : state) {
    const std::string& a = samples[i % samples.size()].text;
    const std::string& b = samples[(i + 1) % samples.size()].text;
    ++i;
    benchmark::DoNotOptimize(TextSimilarity(*f.provider, a, b));
  }
}
BENCHMARK(BM_MockHashSimilarity);

void BM_PetalPerSample(benchmark::State& state) {
  Fixture& f = SharedFixture();
  PetalConfig cfg;
  cfg.granularity = static_cast<int>(state.range(0));
  const auto& samples = f.bench.dataset.samples;
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(PetalScore(samples[i++ % samples.size()],
                                        *f.target, *f.surrogate, *f.provider,
                                        cfg));
  }
}
BENCHMARK(BM_PetalPerSample)->Arg(1)->Arg(4)->Arg(16);

}  // namespace
}  // namespace mia

BENCHMARK_MAIN();
