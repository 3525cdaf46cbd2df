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

#include "mia/petal/petal.h"

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/baselines/logits_attacks.h"
#include "mia/core/cache.h"
#include "mia/core/text.h"
#include "mia/embed/provider.h"
#include "mia/petal/regression.h"
#include "support/brute_force.h"
#include "support/fixtures.h"

namespace mia {
namespace {

using ::testing::Each;
using ::testing::Field;
using testing::FitModel;
using testing::MockOracle;

Sample MakeSample(std::string text, std::string id = "s") {
  Sample s;
  s.id = std::move(id);
  s.text = std::move(text);
  s.label = MembershipLabel::kMember;
  return s;
}

std::unique_ptr<EmbeddingProvider> MockHash() {
  EmbeddingProviderConfig config;
  config.identity = "mock-hash";
  return *MakeEmbeddingProvider(config);
}

std::unique_ptr<EmbeddingProvider> Probe(double slope, double intercept) {
  EmbeddingProviderConfig config;
  config.identity = "probe";
  config.transport = EmbeddingTransport::kProbeAffine;
  config.probe_slope = slope;
  config.probe_intercept = intercept;
  return *MakeEmbeddingProvider(config);
}

TEST(RegressionTest, TwoPointLine) {
  const std::vector<SimProbPair> pairs = {{0, -1}, {1, 2}};
  const RegressionParams p = FitRegression(pairs);
  EXPECT_NEAR(p.slope, 3.0, 1e-15);
  EXPECT_NEAR(p.intercept, -1.0, 1e-15);
}

TEST(RegressionTest, ZeroVarianceGivesConstantPredictor) {
  const std::vector<SimProbPair> pairs = {{0.7, -1}, {0.7, -3}};
  const RegressionParams p = FitRegression(pairs);
  EXPECT_EQ(p.slope, 0.0);
  EXPECT_DOUBLE_EQ(p.intercept, -2.0);
  const std::vector<SimProbPair> one = {{0.2, -5}};
  EXPECT_EQ(FitRegression(one), (RegressionParams{0.0, -5.0}));
}

TEST(RegressionTest, EmptyUsesFallback) {
  EXPECT_EQ(FitRegression({}), kDefaultRegressionFallback);
  EXPECT_EQ(FitRegression({}, RegressionParams{1, 2}),
            (RegressionParams{1, 2}));
}

TEST(RegressionTest, MatchesNormalEquations) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SimProbPair> pairs;
    std::vector<double> x, y;
    for (int i = 2 + trial % 20; i > 0; --i) {
      pairs.push_back({u(rng), 5 * u(rng) - 3});
      x.push_back(pairs.back().similarity);
      y.push_back(pairs.back().logprob);
    }
    double slope, intercept;
    brute::Ols(x, y, &slope, &intercept);
    const RegressionParams p = FitRegression(pairs);
    EXPECT_NEAR(p.slope, slope, 1e-9);
    EXPECT_NEAR(p.intercept, intercept, 1e-9);
  }
}

TEST(PearsonTest, PerfectCorrelations) {
  const std::vector<SimProbPair> up = {{0, 1}, {1, 3}, {2, 5}};
  const std::vector<SimProbPair> down = {{0, 1}, {1, -1}, {2, -3}};
  EXPECT_NEAR(*Pearson(up), 1.0, 1e-15);
  EXPECT_NEAR(*Pearson(down), -1.0, 1e-15);
}

TEST(PearsonTest, UndefinedCases) {
  EXPECT_FALSE(Pearson(std::vector<SimProbPair>{{0, 1}}).ok());
  EXPECT_FALSE(Pearson(std::vector<SimProbPair>{{0, 1}, {0, 2}}).ok());
  EXPECT_FALSE(Pearson(std::vector<SimProbPair>{{0, 1}, {1, 1}}).ok());
}

TEST(PearsonTest, NoisyProbePairsMatchCovarianceFormula) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SimProbPair> pairs;
    std::vector<double> x, y;
    for (int i = 0; i < 31; ++i) {
      const double s = u(rng);
      pairs.push_back({s, 3.83 * s - 0.78 + noise(rng)});
      x.push_back(s);
      y.push_back(pairs.back().logprob);
    }
    EXPECT_NEAR(*Pearson(pairs), brute::Pearson(x, y), 1e-12);
  }
}

TEST(QueryCountTest, BudgetAndGranularity) {
  EXPECT_EQ(PetalQueryCount(33, 1.0, 1), 32);
  EXPECT_EQ(PetalQueryCount(33, 0.5, 1), 16);
  EXPECT_EQ(PetalQueryCount(10, 0.5, 1), 5);
  EXPECT_EQ(PetalQueryCount(33, 1.0, 16), 2);
  EXPECT_EQ(PetalQueryCount(33, 1.0, 5), 7);
  EXPECT_EQ(PetalQueryCount(33, 0.01, 1), 1);
}

TEST(SurrogatePairsTest, MemorizedSampleGivesUnitSimilarities) {
  const std::string text = "alpha beta gamma delta epsilon zeta";
  auto surrogate = MockOracle(FitModel({text}, 3, 0.0), "sur");
  auto provider = MockHash();
  auto pairs = CollectSurrogatePairs(*surrogate, *provider, MakeSample(text),
                                     DecodingConfig::Greedy());
  ASSERT_TRUE(pairs.ok()) << pairs.status();
  EXPECT_EQ(pairs->size(), 5);
  for (const SimProbPair& p : *pairs) EXPECT_NEAR(p.similarity, 1.0, 1e-12);
}

TEST(SurrogatePairsTest, ProbePairsLieOnTheLine) {
  auto model = FitModel({"a b c d a c b d", "b a d c"}, 2, 0.5);
  auto surrogate = MockOracle(model, "sur");
  auto provider = Probe(8.0, -3.0);
  auto pairs = CollectSurrogatePairs(*surrogate, *provider,
                                     MakeSample("a b d c a b"), {});
  ASSERT_TRUE(pairs.ok()) << pairs.status();
  ASSERT_EQ(pairs->size(), 5);
  for (const SimProbPair& p : *pairs) {
    EXPECT_NEAR(8.0 * p.similarity - 3.0, p.logprob, 1e-12);
  }
  const RegressionParams fit = FitRegression(*pairs);
  EXPECT_NEAR(fit.slope, 8.0, 1e-9);
  EXPECT_NEAR(fit.intercept, -3.0, 1e-9);
}

TEST(TargetSimsTest, HalfBudgetCoversTrailingPositions) {
  const std::string text = "t1 t2 t3 t4 t5 t6 t7 t8 t9";
  auto target =
      MockOracle(FitModel({text}, 2, 0.0), "tgt", Capability::kLabelOnly);
  auto provider = MockHash();
  PetalConfig cfg;
  cfg.budget_fraction = 0.5;
  auto sims = CollectTargetSims(*target, *provider, MakeSample(text), cfg);
  ASSERT_TRUE(sims.ok()) << sims.status();
  ASSERT_EQ(sims->size(), 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ((*sims)[i].start_position, 6 + i);
    EXPECT_NEAR((*sims)[i].similarity, 1.0, 1e-12);
  }
  EXPECT_EQ(target->stats().generate_calls, 4);
}

TEST(TargetSimsTest, GranularityGroupsTokens) {
  const std::string text = "a b c d e f g h i j k";
  auto target = MockOracle(FitModel({text}, 2, 0.0), "tgt");
  auto provider = MockHash();
  PetalConfig cfg;
  cfg.granularity = 4;
  auto sims = CollectTargetSims(*target, *provider, MakeSample(text), cfg);
  ASSERT_TRUE(sims.ok()) << sims.status();
  ASSERT_EQ(sims->size(), 3);
  EXPECT_EQ((*sims)[0].token_count, 4);
  EXPECT_EQ((*sims)[2].token_count, 2);
  EXPECT_EQ((*sims)[2].start_position, 10);
  EXPECT_EQ(target->stats().generate_calls, 3);
}

TEST(TargetSimsTest, BlockMayCoverAllPositions) {
  const std::string text = "a b c";
  auto target = MockOracle(FitModel({text}, 2, 0.0), "tgt");
  auto provider = MockHash();
  PetalConfig cfg;
  cfg.granularity = 4;
  auto sims = CollectTargetSims(*target, *provider, MakeSample(text), cfg);
  ASSERT_TRUE(sims.ok()) << sims.status();
  ASSERT_EQ(sims->size(), 1);
  EXPECT_EQ((*sims)[0].token_count, 2);
  EXPECT_EQ(target->stats().generate_calls, 1);
}

TEST(ApproxPerplexityTest, Examples) {
  const RegressionParams params{2.0, -1.0};
  // 2 * sim - 1 = -ln 2.
  const double sim = (1.0 - std::log(2.0)) / 2.0;
  auto one = ApproxPerplexity(std::vector<BlockSim>{{sim, 1, 2}}, params);
  EXPECT_NEAR(one->value, 2.0, 1e-12);
  auto certain =
      ApproxPerplexity(std::vector<BlockSim>{{0.5, 1, 2}, {0.5, 1, 3}}, params);
  EXPECT_NEAR(certain->value, 1.0, 1e-15);
  EXPECT_FALSE(ApproxPerplexity({}, params).ok());
}

TEST(ApproxPerplexityTest, WeightedMean) {
  const RegressionParams params{1.0, 0.0};
  const std::vector<BlockSim> sims = {{-1, 1, 2}, {-3, 1, 3}};
  auto r = ApproxPerplexity(sims, params, std::vector<double>{0.25, 0.75});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->log_value, 2.5, 1e-15);
  EXPECT_NEAR(r->value, std::exp(2.5), 1e-12);
  EXPECT_FALSE(ApproxPerplexity(sims, params, std::vector<double>{1.0}).ok());
}

TEST(ApproxPerplexityTest, MultiTokenBlocksAverageOverTokens) {
  const RegressionParams params{1.0, 0.0};
  const std::vector<BlockSim> sims = {{-4, 2, 2}, {-2, 1, 4}};
  EXPECT_NEAR(ApproxPerplexity(sims, params)->log_value, 2.0, 1e-15);
}

TEST(PetalScoreTest, ProbePipelineRecoversTruePerplexity) {
  auto model = FitModel({"a b c d a c b d", "b a d c", "d d a b"}, 2, 0.5);
  auto target = MockOracle(model, "tgt");
  auto surrogate = MockOracle(model, "sur");
  auto provider = Probe(8.0, -3.0);
  const Sample sample = MakeSample("a b d c a b c");
  auto r = PetalScore(sample, *target, *surrogate, *provider, {});
  ASSERT_TRUE(r.ok()) << r.status();
  auto ppl = Perplexity(*target, sample.text);
  EXPECT_NEAR(r->perplexity.value, *ppl, 1e-9);
  EXPECT_NEAR(r->score.score, -std::log(*ppl), 1e-9);
  EXPECT_EQ(r->score.diagnostics.at("target_queries"), 6);
}

TEST(PetalScoreTest, WarmCacheRepeatsWithoutBackendCalls) {
  testing::TempDir dir;
  auto cache = ResponseCache::Open(dir.path());
  auto target = MockOracle(FitModel({"x y z w v"}, 2, 0.2), "tgt",
                           Capability::kLabelOnly);
  auto surrogate = MockOracle(FitModel({"x z y v w"}, 2, 0.2), "sur");
  target->AttachCache(cache->get());
  surrogate->AttachCache(cache->get());
  auto provider = MockHash();
  const Sample sample = MakeSample("x y z w v");
  auto first = PetalScore(sample, *target, *surrogate, *provider, {});
  const OracleStats t0 = target->stats();
  const OracleStats s0 = surrogate->stats();
  auto second = PetalScore(sample, *target, *surrogate, *provider, {});
  ASSERT_TRUE(first.ok() && second.ok());
  EXPECT_EQ(first->score.score, second->score.score);
  EXPECT_EQ(target->stats().generate_backend, t0.generate_backend);
  EXPECT_EQ(surrogate->stats().generate_backend, s0.generate_backend);
  EXPECT_EQ(surrogate->stats().score_backend, s0.score_backend);
}

TEST(PetalConfigTest, Validation) {
  PetalConfig cfg;
  cfg.budget_fraction = 0;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = {};
  cfg.granularity = 0;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = {};
  cfg.weights = std::vector<double>{0.5, 0.4};
  EXPECT_FALSE(cfg.Validate().ok());
  cfg.weights = std::vector<double>{0.5, 0.5};
  EXPECT_TRUE(cfg.Validate().ok());
  cfg.granularity = 2;
  EXPECT_FALSE(cfg.Validate().ok());
}

TEST(PetalScoreTest, ShortSamplesFailCleanly) {
  auto model = FitModel({"a b"}, 2, 0.5);
  auto target = MockOracle(model, "tgt");
  auto provider = MockHash();
  auto r =
      PetalScore(MakeSample("a b", "tiny"), *target, *target, *provider, {});
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(std::string(r.status().message()), ::testing::HasSubstr("tiny"));
}

}  // namespace
}  // namespace mia
