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

#ifndef MIA_RUNNER_RUNNER_H_
#define MIA_RUNNER_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/baselines/attack_score.h"
#include "mia/core/cache.h"
#include "mia/core/types.h"
#include "mia/embed/provider.h"
#include "mia/metrics/report.h"
#include "mia/oracle/oracle.h"
#include "mia/petal/petal.h"
#include "mia/runner/config.h"

namespace mia {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitConfigError = 2;

// Share of failed samples above which a command exits with
// kExitPartialFailure.
inline constexpr double kMaxFailureFraction = 0.10;

struct RunOptions {
  std::optional<uint64_t> seed;
  std::optional<int> parallelism;
  // Cache-only: any cache miss on a remote backend is an error.
  bool offline = false;
};

// Applies command-line overrides to a parsed configuration.
RunConfig ApplyOptions(RunConfig config, const RunOptions& options);

// The live oracles, embedding provider and cache described by a RunConfig.
class Environment {
 public:
  static absl::StatusOr<std::unique_ptr<Environment>> Create(
      const RunConfig& config, bool offline);

  Oracle* target() const { return target_.get(); }
  Oracle* surrogate() const { return surrogate_.get(); }
  Oracle* reference() const { return reference_.get(); }
  EmbeddingProvider* provider() const { return provider_.get(); }
  ResponseCache* cache() const { return cache_.get(); }

  // HTTP attempts made by every backend so far.
  uint64_t network_requests() const;

 private:
  Environment() = default;

  std::unique_ptr<ResponseCache> cache_;
  std::unique_ptr<Oracle> target_;
  std::unique_ptr<Oracle> surrogate_;
  std::unique_ptr<Oracle> reference_;
  std::unique_ptr<EmbeddingProvider> provider_;
};

// Loads the dataset and applies word truncation.
absl::StatusOr<Dataset> LoadRunDataset(const RunConfig& config);

// Checks every attack against the configured oracles, provider and dataset.
// Touches no backend.
absl::Status Preflight(const RunConfig& config, const Dataset& dataset);

struct SampleOutcome {
  std::optional<AttackScore> score;
  std::string error;
  // One JSON object describing how the score was obtained.
  std::string diagnostics_json;
  // Kept for PETAL so that weightings can be re-evaluated offline.
  std::optional<PetalResult> petal;
};

struct AttackRun {
  AttackSpec spec;
  std::string dataset;
  std::string model;
  // Dataset order.
  std::vector<SampleOutcome> outcomes;
  std::vector<MembershipLabel> labels;
  size_t failures = 0;
  // Failure of the metric computation itself (e.g. one class left).
  absl::Status evaluation;
  EvaluationReport report;
};

// Calls fn(i) for i in [0, n) on up to `workers` threads.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn);

// Scores every sample with one attack and evaluates the result. Robustness
// attacks without a fixed prefix fraction are run for 0.1, 0.2, ..., 0.9 and
// the best-AUC run is returned.
AttackRun RunAttack(const Environment& env, const RunConfig& config,
                    const Dataset& dataset, const AttackSpec& spec);

// Builds a report from per-sample outcomes (successful samples only).
void EvaluateRun(AttackRun& run, std::span<const double> fpr_targets);

// "<attack>__<dataset>__<model>" with path-unsafe characters replaced.
std::string OutputDirName(std::string_view attack, std::string_view dataset,
                          std::string_view model);

// report.json, report.csv, roc.csv, scores.jsonl, diagnostics.jsonl.
absl::Status WriteAttackOutputs(const AttackRun& run,
                                const std::filesystem::path& dir);

// Command entry points. Each returns a process exit code and writes
// human-readable progress to `out` and problems to `err`.
int CmdRun(const RunConfig& config, const RunOptions& options,
           std::ostream& out, std::ostream& err);
int CmdSweep(const RunConfig& config, const RunOptions& options,
             std::ostream& out, std::ostream& err);
int CmdRegress(const RunConfig& config, const RunOptions& options,
               std::ostream& out, std::ostream& err);
int CmdCache(const RunConfig& config, std::string_view subcommand,
             std::ostream& out, std::ostream& err);

// Per-position Dirichlet(1, ..., 1) weights of dimension `k` for draw
// number `draw`, reproducible from `seed`.
std::vector<double> DirichletDraw(uint64_t seed, int draw, size_t k);

// The first `m` entries of `weights`, renormalized to sum to 1.
std::vector<double> LeadingWeights(std::span<const double> weights, size_t m);

}  // namespace mia

#endif  // MIA_RUNNER_RUNNER_H_
