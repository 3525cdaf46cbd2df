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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "glog/logging.h"
#include "mia/baselines/logits_attacks.h"
#include "mia/baselines/robustness.h"
#include "mia/baselines/zlib_size.h"
#include "mia/core/text.h"
#include "mia/embed/provider.h"
#include "mia/metrics/metrics.h"
#include "mia/metrics/report.h"
#include "mia/petal/petal.h"
#include "mia/runner/config.h"
#include "mia/runner/runner.h"
#include "mia/synthetic/benchmark.h"
#include "support/brute_force.h"
#include "support/fake_openai_server.h"
#include "support/fixtures.h"

namespace mia {
namespace {

namespace fs = std::filesystem;
using testing::FitModel;
using testing::MockOracle;

// Pinned thresholds.
constexpr double kAc1Tolerance = 1e-12;
constexpr double kAc1MaxSeconds = 5.0;
constexpr int kAc2Trials = 100;
constexpr int kAc2Samples = 1000;
constexpr double kAc2AucLow = 0.45;
constexpr double kAc2AucHigh = 0.55;
constexpr double kAc2TprHigh = 0.03;
constexpr int kAc2RequiredTrials = 95;
constexpr double kAc2MaxSeconds = 10.0;
constexpr double kAc3Tolerance = 1e-9;
constexpr double kAc3Slope = 20.0;
constexpr double kAc3Intercept = -8.0;
constexpr double kAc3MaxSeconds = 5.0;
constexpr double kAc4PplFloor = 0.90;
constexpr double kAc4PetalFloor = 0.80;
constexpr double kAc4MaxGap = 0.10;
constexpr double kAc4MaxSeconds = 60.0;
constexpr double kAc6Tolerance = 1e-9;
constexpr double kAc9GeneralizedLow = 0.40;
constexpr double kAc9GeneralizedHigh = 0.60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::vector<MembershipLabel> Labels(const Dataset& ds) {
  std::vector<MembershipLabel> out;
  for (const Sample& s : ds.samples) out.push_back(s.label);
  return out;
}

double AucOf(std::span<const double> scores,
             std::span<const MembershipLabel> labels) {
  auto roc = ComputeRoc(scores, labels);
  CHECK(roc.ok()) << roc.status();
  return Auc(*roc);
}

Outcome Ac1MetricsEquivalence() {
  Stopwatch clock;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int mismatched_roc = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const size_t n = 2 + rng() % 49;
    const int levels = instance % 3 == 0 ? 4 : 1 << 30;
    std::vector<double> scores(n);
    std::vector<MembershipLabel> labels(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % levels) / levels;
      labels[i] =
          rng() % 2 ? MembershipLabel::kMember : MembershipLabel::kNonMember;
    }
    labels[0] = MembershipLabel::kMember;
    labels[1] = MembershipLabel::kNonMember;
    auto roc = ComputeRoc(scores, labels);
    if (!roc.ok()) return {false, std::string(roc.status().message())};
    auto diff = [&](double a, double b) {
      worst = std::max(worst, std::abs(a - b));
    };
    diff(Auc(*roc), brute::Auc(scores, labels));
    diff(BalancedAccuracy(*roc).value, brute::BalancedAccuracy(scores, labels));
    for (double fpr : {0.01, 0.05}) {
      diff(TprAtFpr(*roc, fpr).value, brute::TprAtFpr(scores, labels, fpr));
    }
    const std::vector<brute::Point> points = brute::Roc(scores, labels);
    if (points.size() != roc->points.size()) {
      ++mismatched_roc;
      continue;
    }
    for (size_t i = 0; i < points.size(); ++i) {
      diff(roc->points[i].fpr, points[i].fpr);
      diff(roc->points[i].tpr, points[i].tpr);
      if (roc->points[i].threshold != points[i].threshold) ++mismatched_roc;
    }
  }
  const double secs = clock.Seconds();
  return {
      worst <= kAc1Tolerance && mismatched_roc == 0 && secs < kAc1MaxSeconds,
      absl::StrFormat("max_abs_diff=%.3g roc_mismatches=%d time=%.2fs", worst,
                      mismatched_roc, secs)};
}

Outcome Ac2RandomGuess() {
  Stopwatch clock;
  int good = 0;
  double min_auc = 1.0, max_auc = 0.0, max_tpr = 0.0;
  for (int trial = 0; trial < kAc2Trials; ++trial) {
    std::mt19937_64 rng(MixSeed(2024, trial));
    std::vector<double> scores(kAc2Samples);
    std::vector<MembershipLabel> labels(kAc2Samples);
    for (int i = 0; i < kAc2Samples; ++i) {
      labels[i] =
          i % 2 == 0 ? MembershipLabel::kMember : MembershipLabel::kNonMember;
      scores[i] = UnitInterval(rng());
    }
    auto report = Evaluate("random", "noise", "none", scores, labels,
                           std::vector<double>{0.01});
    if (!report.ok()) return {false, std::string(report.status().message())};
    const double auc = report->auc;
    const double tpr = report->tpr_at_fpr.at(0.01).value;
    min_auc = std::min(min_auc, auc);
    max_auc = std::max(max_auc, auc);
    max_tpr = std::max(max_tpr, tpr);
    if (auc >= kAc2AucLow && auc <= kAc2AucHigh && tpr >= 0.0 &&
        tpr <= kAc2TprHigh) {
      ++good;
    }
  }
  const double secs = clock.Seconds();
  return {good >= kAc2RequiredTrials && secs < kAc2MaxSeconds,
          absl::StrFormat("in_band=%d/%d auc_range=[%.3f,%.3f] "
                          "max_tpr@1%%=%.3f time=%.2fs",
                          good, kAc2Trials, min_auc, max_auc, max_tpr, secs)};
}

SyntheticOptions SmallBenchmark() {
  SyntheticOptions o;
  o.vocab_size = 300;
  o.text_words = 24;
  o.members = 40;
  o.nonmembers = 40;
  o.background_texts = 80;
  o.surrogate_texts = 300;
  o.generalized_texts = 600;
  return o;
}

Outcome Ac3PetalExactRecovery() {
  Stopwatch clock;
  auto bench = BuildSyntheticBenchmark(SmallBenchmark());
  if (!bench.ok()) return {false, std::string(bench.status().message())};
  auto target = MockOracle(bench->generalized_target, "target");
  auto surrogate = MockOracle(bench->surrogate, "surrogate");
  EmbeddingProviderConfig pc;
  pc.identity = "probe";
  pc.transport = EmbeddingTransport::kProbeAffine;
  pc.probe_slope = kAc3Slope;
  pc.probe_intercept = kAc3Intercept;
  auto provider = MakeEmbeddingProvider(pc);
  if (!provider.ok()) return {false, std::string(provider.status().message())};

  double param_err = 0.0, ppl_err = 0.0;
  std::vector<double> petal_scores, ppl_scores;
  for (const Sample& s : bench->dataset.samples) {
    auto r = PetalScore(s, *target, *surrogate, **provider, {});
    if (!r.ok()) return {false, std::string(r.status().message())};
    auto ppl = PplScore(*target, s);
    if (!ppl.ok()) return {false, std::string(ppl.status().message())};
    param_err = std::max({param_err, std::abs(r->params.slope - kAc3Slope),
                          std::abs(r->params.intercept - kAc3Intercept)});
    ppl_err = std::max(ppl_err, std::abs(r->perplexity.value - -ppl->score));
    petal_scores.push_back(r->score.score);
    ppl_scores.push_back(ppl->score);
  }
  const auto labels = Labels(bench->dataset);
  const double auc_petal = AucOf(petal_scores, labels);
  const double auc_ppl = AucOf(ppl_scores, labels);
  const double secs = clock.Seconds();
  return {param_err <= kAc3Tolerance && ppl_err <= kAc3Tolerance &&
              auc_petal == auc_ppl && secs < kAc3MaxSeconds,
          absl::StrFormat("param_err=%.3g ppl_err=%.3g auc_petal=%.6f "
                          "auc_ppl=%.6f time=%.2fs",
                          param_err, ppl_err, auc_petal, auc_ppl, secs)};
}

std::unique_ptr<EmbeddingProvider> MockHash() {
  EmbeddingProviderConfig config;
  config.identity = "mock-hash";
  return *MakeEmbeddingProvider(config);
}

absl::StatusOr<double> PetalAuc(const SyntheticBenchmark& bench,
                                EmbeddingProvider& provider,
                                const PetalConfig& cfg) {
  auto target =
      MockOracle(bench.memorizing_target, "target", Capability::kLabelOnly);
  auto surrogate = MockOracle(bench.surrogate, "surrogate");
  std::vector<double> scores;
  for (const Sample& s : bench.dataset.samples) {
    auto r = PetalScore(s, *target, *surrogate, provider, cfg);
    if (!r.ok()) return r.status();
    scores.push_back(r->score.score);
  }
  return AucOf(scores, Labels(bench.dataset));
}

Outcome Ac4Synthetic(const SyntheticBenchmark& bench,
                     EmbeddingProvider& provider, double* petal_auc_out) {
  Stopwatch clock;
  auto target = MockOracle(bench.memorizing_target, "target");
  std::vector<double> ppl_scores;
  for (const Sample& s : bench.dataset.samples) {
    auto r = PplScore(*target, s);
    if (!r.ok()) return {false, std::string(r.status().message())};
    ppl_scores.push_back(r->score);
  }
  const double auc_ppl = AucOf(ppl_scores, Labels(bench.dataset));
  auto auc_petal = PetalAuc(bench, provider, {});
  if (!auc_petal.ok()) {
    return {false, std::string(auc_petal.status().message())};
  }
  *petal_auc_out = *auc_petal;
  const double secs = clock.Seconds();
  return {auc_ppl >= kAc4PplFloor && *auc_petal >= kAc4PetalFloor &&
              std::abs(auc_ppl - *auc_petal) <= kAc4MaxGap &&
              secs < kAc4MaxSeconds,
          absl::StrFormat("auc_ppl=%.4f auc_petal=%.4f time=%.2fs", auc_ppl,
                          *auc_petal, secs)};
}

// Expected number of target generations, counted from the position set.
int ExpectedQueries(int n, double budget, int granularity) {
  const int positions = n - 1;
  int m = 0;
  while (m < positions && m < budget * positions - 1e-9) ++m;
  m = std::max(m, 1);
  int blocks = 0;
  for (int covered = 0; covered < m; covered += granularity) ++blocks;
  return blocks;
}

Outcome Ac5QueryCounts() {
  auto provider = MockHash();
  int cases = 0, mismatches = 0;
  std::string first_bad;
  for (int n : {3, 8, 17, 33}) {
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.push_back(absl::StrCat("w", i % 7));
    const std::string text = JoinWords(words);
    Sample sample;
    sample.id = absl::StrCat("n", n);
    sample.text = text;
    sample.label = MembershipLabel::kMember;
    for (double budget : {1.0, 0.5, 0.25}) {
      for (int g : {1, 2, 3, 16}) {
        auto target = MockOracle(FitModel({text}, 2, 0.5), "target",
                                 Capability::kLabelOnly);
        auto surrogate = MockOracle(FitModel({text}, 2, 0.5), "surrogate");
        PetalConfig cfg;
        cfg.budget_fraction = budget;
        cfg.granularity = g;
        auto r = PetalScore(sample, *target, *surrogate, *provider, cfg);
        ++cases;
        const int want = ExpectedQueries(n, budget, g);
        const int got =
            r.ok() ? static_cast<int>(target->stats().generate_calls) : -1;
        if (got != want) {
          if (mismatches++ == 0) {
            first_bad = absl::StrFormat(
                " first_mismatch=(n=%d,b=%.2f,g=%d:"
                " got %d want %d)",
                n, budget, g, got, want);
          }
        }
      }
    }
  }
  return {mismatches == 0, absl::StrFormat("cases=%d mismatches=%d%s", cases,
                                           mismatches, first_bad)};
}

// Per-token log-probabilities by corpus scan.
std::vector<double> HandLogProbs(const std::vector<std::string>& corpus,
                                 int order, double k, const std::string& text) {
  std::vector<std::vector<std::string>> split;
  std::set<std::string> vocab;
  for (const auto& c : corpus) {
    split.push_back(SplitWords(c));
    vocab.insert(split.back().begin(), split.back().end());
  }
  const auto words = SplitWords(text);
  std::vector<double> out;
  for (size_t i = 1; i < words.size(); ++i) {
    const std::vector<std::string> history(words.begin(), words.begin() + i);
    out.push_back(
        brute::NGramLogProb(split, vocab.size(), order, k, history, words[i]));
  }
  return out;
}

double Mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double HandPpl(const std::vector<std::string>& corpus, int order, double k,
               const std::string& text) {
  return std::exp(-Mean(HandLogProbs(corpus, order, k, text)));
}

Outcome Ac6BaselineFixtures() {
  const std::vector<std::string> t_corpus = {"a b c d e a b", "c d e e a b c",
                                             "b a d c e"};
  const std::vector<std::string> r_corpus = {"e d c b a", "a c e b d a"};
  const int order = 2;
  const double k = 0.5;
  auto target = MockOracle(FitModel(t_corpus, order, k), "target");
  auto reference = MockOracle(FitModel(r_corpus, order, k), "reference");
  double worst = 0.0;
  bool mink_mean_exact = true;
  std::mt19937_64 rng(6);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e"};
  for (int len = 4; len <= 10; ++len) {
    std::vector<std::string> words;
    for (int i = 0; i < len; ++i) words.push_back(alphabet[rng() % 5]);
    Sample s;
    s.id = absl::StrCat("fixture", len);
    s.text = JoinWords(words);
    s.label = MembershipLabel::kMember;
    std::vector<std::string> neighbors;
    double neighbor_ppl = 0.0;
    for (int j = 0; j < 10; ++j) {
      auto w = words;
      w[rng() % w.size()] = alphabet[rng() % 5];
      neighbors.push_back(JoinWords(w));
      neighbor_ppl += HandPpl(t_corpus, order, k, neighbors.back());
    }
    s.neighbors = neighbors;

    const double ppl = HandPpl(t_corpus, order, k, s.text);
    const double ref_ppl = HandPpl(r_corpus, order, k, s.text);
    std::vector<double> lps = HandLogProbs(t_corpus, order, k, s.text);
    std::sort(lps.begin(), lps.end());
    const size_t kcount = std::max<size_t>(
        1, static_cast<size_t>(std::ceil(0.2 * lps.size() - 1e-9)));
    const double mink20 =
        Mean(std::vector<double>(lps.begin(), lps.begin() + kcount));

    auto track = [&](const absl::StatusOr<AttackScore>& got, double want) {
      worst =
          std::max(worst, got.ok() ? std::abs(got->score - want)
                                   : std::numeric_limits<double>::infinity());
    };
    track(PplScore(*target, s), -ppl);
    track(ReferenceScore(*target, *reference, s), ref_ppl - ppl);
    track(ZlibScore(*target, s),
          -ppl / static_cast<double>(ZlibCompressedSize(s.text)));
    track(NeighborhoodScore(*target, s), neighbor_ppl / 10.0 - ppl);
    track(MinKScore(*target, s, MinKConfig{20}), mink20);

    auto full = MinKScore(*target, s, MinKConfig{100});
    auto logprobs = ScoreText(*target, s.text);
    if (!full.ok() || !logprobs.ok() || full->score != Mean(*logprobs)) {
      mink_mean_exact = false;
    }
  }
  return {worst <= kAc6Tolerance && mink_mean_exact,
          absl::StrFormat("max_abs_diff=%.3g mink100_equals_mean=%s", worst,
                          mink_mean_exact ? "yes" : "no")};
}

Outcome Ac7Granularity(const SyntheticBenchmark& bench,
                       EmbeddingProvider& provider, double auc_g1) {
  PetalConfig cfg;
  cfg.granularity = 16;
  auto auc_g16 = PetalAuc(bench, provider, cfg);
  if (!auc_g16.ok()) return {false, std::string(auc_g16.status().message())};
  return {auc_g1 >= *auc_g16,
          absl::StrFormat("auc_g1=%.4f auc_g16=%.4f", auc_g1, *auc_g16)};
}

Outcome Ac8Reproducibility() {
  auto bench = BuildSyntheticBenchmark(SmallBenchmark());
  if (!bench.ok()) return {false, std::string(bench.status().message())};
  testing::TempDir dir;
  if (auto st = WriteSyntheticBenchmark(*bench, dir.path()); !st.ok()) {
    return {false, std::string(st.message())};
  }
  testing::FakeOpenAiServer server(bench->memorizing_target);
  const std::string yaml =
      "dataset:\n  path: synthetic.jsonl\n"
      "oracles:\n"
      "  target:\n    transport: http\n    identity: remote\n"
      "    capability: label_only\n"
      "    endpoint_url: " +
      server.url() +
      "\n"
      "  surrogate:\n    model_path: surrogate.ngram.json\n"
      "embedding:\n  transport: http\n  identity: remote-embed\n"
      "  endpoint_url: " +
      server.url() +
      "\n"
      "attacks:\n  - petal\n  - name: robustness-rs\n"
      "    prefix_fraction: 0.5\n"
      "cache_dir: cache\noutput_dir: out\nseed: 11\n";
  testing::WriteFile(dir.path() / "config.yaml", yaml);
  auto cfg = LoadRunConfig(dir.path() / "config.yaml");
  if (!cfg.ok()) return {false, std::string(cfg.status().message())};

  const std::vector<std::string> files = {"report.json", "report.csv",
                                          "roc.csv", "scores.jsonl",
                                          "diagnostics.jsonl"};
  auto snapshot = [&]() {
    std::vector<std::string> out;
    for (const char* attack : {"petal", "robustness-rs"}) {
      const fs::path d =
          dir.path() / "out" / OutputDirName(attack, "synthetic", "remote");
      for (const auto& f : files) out.push_back(testing::ReadFile(d / f));
    }
    return out;
  };
  std::ostringstream out1, out2, err;
  const int code1 = CmdRun(*cfg, {}, out1, err);
  const auto first = snapshot();
  const uint64_t after_first = server.requests();
  const int code2 = CmdRun(*cfg, {}, out2, err);
  const auto second = snapshot();
  const uint64_t second_requests = server.requests() - after_first;
  const bool identical = first == second;
  const bool reported_zero =
      out2.str().find("network requests: 0") != std::string::npos;
  return {code1 == kExitOk && code2 == kExitOk && after_first > 0 &&
              identical && second_requests == 0 && reported_zero,
          absl::StrFormat("exit=(%d,%d) first_run_requests=%d "
                          "second_run_requests=%d byte_identical=%s",
                          code1, code2, after_first, second_requests,
                          identical ? "yes" : "no")};
}

absl::StatusOr<double> RobustnessAuc(const SyntheticBenchmark& bench,
                                     std::shared_ptr<const NGramModel> model,
                                     EmbeddingProvider& provider) {
  auto target = MockOracle(std::move(model), "target", Capability::kLabelOnly);
  RobustnessConfig cfg;
  cfg.augmentation = Augmentation::kRandomSwap;
  cfg.prefix_fraction = 0.5;
  cfg.seed = 7;
  std::vector<double> scores;
  for (const Sample& s : bench.dataset.samples) {
    auto r = RobustnessScore(*target, &provider, s, cfg, {});
    if (!r.ok()) return r.status();
    scores.push_back(r->score);
  }
  return AucOf(scores, Labels(bench.dataset));
}

Outcome Ac9Robustness(const SyntheticBenchmark& bench,
                      EmbeddingProvider& provider) {
  auto memorizing = RobustnessAuc(bench, bench.memorizing_target, provider);
  if (!memorizing.ok()) {
    return {false, std::string(memorizing.status().message())};
  }
  auto generalized = RobustnessAuc(bench, bench.generalized_target, provider);
  if (!generalized.ok()) {
    return {false, std::string(generalized.status().message())};
  }
  return {*memorizing > 0.5 && *generalized >= kAc9GeneralizedLow &&
              *generalized <= kAc9GeneralizedHigh,
          absl::StrFormat("auc_memorizing=%.4f auc_generalized=%.4f",
                          *memorizing, *generalized)};
}

int Main() {
  int failures = 0;
  auto report = [&](const char* id, const char* what, const Outcome& o) {
    std::printf("%s %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", what,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report("AC1", "metrics oracle equivalence", Ac1MetricsEquivalence());
  report("AC2", "random-guess calibration", Ac2RandomGuess());
  report("AC3", "petal exact recovery", Ac3PetalExactRecovery());

  auto bench = BuildSyntheticBenchmark();
  if (!bench.ok()) {
    std::printf("synthetic benchmark failed: %s\n",
                std::string(bench.status().message()).c_str());
    return 1;
  }
  auto provider = MockHash();
  double petal_auc = 0.0;
  report("AC4", "synthetic memorization benchmark",
         Ac4Synthetic(*bench, *provider, &petal_auc));
  report("AC5", "query-count contract", Ac5QueryCounts());
  report("AC6", "baseline formula fixtures", Ac6BaselineFixtures());
  report("AC7", "granularity degradation direction",
         Ac7Granularity(*bench, *provider, petal_auc));
  report("AC8", "warm-cache reproducibility", Ac8Reproducibility());
  report("AC9", "robustness-baseline sanity", Ac9Robustness(*bench, *provider));
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace mia

int main(int argc, char** argv) {
  (void)argc;
  google::InitGoogleLogging(argv[0]);
  FLAGS_logtostderr = true;
  FLAGS_minloglevel = 2;
  return mia::Main();
}
