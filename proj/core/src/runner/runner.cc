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

#include "mia/runner/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include "absl/strings/str_cat.h"
#include "glog/logging.h"
#include "mia/baselines/logits_attacks.h"
#include "mia/baselines/robustness.h"
#include "mia/core/dataset.h"
#include "mia/core/text.h"
#include "mia/petal/regression.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::ordered_json;

json Num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

bool IsRobustness(std::string_view name) {
  return name == kAttackRobustnessRs || name == kAttackRobustnessWs ||
         name == kAttackRobustnessBt;
}

std::string Msg(const absl::Status& st) { return std::string(st.message()); }

absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("failed writing ", path.string()));
  }
  return absl::OkStatus();
}

json DiagnosticsMap(const AttackScore& score) {
  json d = json::object();
  for (const auto& [k, v] : score.diagnostics) d[k] = Num(v);
  return d;
}

std::string PetalDiagnostics(const Sample& sample, const PetalResult& r) {
  json pairs = json::array();
  for (const SimProbPair& p : r.pairs) {
    pairs.push_back(json::array({Num(p.similarity), Num(p.logprob)}));
  }
  json sims = json::array();
  for (const BlockSim& b : r.target_sims) {
    sims.push_back(
        json::array({b.start_position, b.token_count, Num(b.similarity)}));
  }
  json out;
  out["id"] = sample.id;
  out["slope"] = Num(r.params.slope);
  out["intercept"] = Num(r.params.intercept);
  out["pairs"] = std::move(pairs);
  out["target_sims"] = std::move(sims);
  out["approx_log_perplexity"] = Num(r.perplexity.log_value);
  out["approx_perplexity"] = Num(r.perplexity.value);
  return out.dump();
}

SampleOutcome ScoreSample(const Environment& env, const RunConfig& config,
                          const AttackSpec& spec, const Sample& sample) {
  SampleOutcome outcome;
  absl::StatusOr<AttackScore> score = absl::UnknownError("not scored");
  const std::string& name = spec.name;
  if (name == kAttackPetal) {
    auto r = PetalScore(sample, *env.target(), *env.surrogate(),
                        *env.provider(), spec.petal);
    if (!r.ok()) {
      outcome.error = Msg(r.status());
      return outcome;
    }
    outcome.score = r->score;
    outcome.diagnostics_json = PetalDiagnostics(sample, *r);
    outcome.petal = *std::move(r);
    return outcome;
  }
  if (name == kAttackPpl) {
    score = PplScore(*env.target(), sample);
  } else if (name == kAttackReference) {
    score = ReferenceScore(*env.target(), *env.reference(), sample);
  } else if (name == kAttackZlib) {
    score = ZlibScore(*env.target(), sample, spec.zlib);
  } else if (name == kAttackNeighborhood) {
    score = NeighborhoodScore(*env.target(), sample);
  } else if (name == kAttackMinK) {
    score = MinKScore(*env.target(), sample, spec.mink);
  } else if (IsRobustness(name)) {
    RobustnessConfig r = spec.robustness;
    r.seed = config.seed;
    score = RobustnessScore(*env.target(), env.provider(), sample, r,
                            spec.decoding);
  }
  if (!score.ok()) {
    outcome.error = Msg(score.status());
    return outcome;
  }
  json d;
  d["id"] = sample.id;
  d["diagnostics"] = DiagnosticsMap(*score);
  outcome.diagnostics_json = d.dump();
  outcome.score = *std::move(score);
  return outcome;
}

std::map<std::string, std::string> SpecParameters(const AttackSpec& spec) {
  std::map<std::string, std::string> p;
  if (spec.name == kAttackPetal) {
    p["budget_fraction"] = FormatDouble(spec.petal.budget_fraction);
    p["granularity"] = std::to_string(spec.petal.granularity);
    p["decoding"] = spec.petal.decoding.CanonicalString();
    p["weights"] = spec.petal.weights.has_value() ? "explicit" : "uniform";
  } else if (spec.name == kAttackMinK) {
    p["k_percent"] = FormatDouble(spec.mink.k_percent);
  } else if (spec.name == kAttackZlib) {
    p["variant"] = spec.zlib.variant == ZlibVariant::kPerplexity
                       ? "perplexity"
                       : "log_perplexity";
  } else if (IsRobustness(spec.name)) {
    p["prefix_fraction"] = FormatDouble(spec.robustness.prefix_fraction);
    p["num_augmented"] = std::to_string(spec.robustness.num_augmented);
    p["similarity"] =
        std::string(SimilarityMetricName(spec.robustness.similarity_metric));
    p["decoding"] = spec.decoding.CanonicalString();
  }
  return p;
}

AttackRun RunOnce(const Environment& env, const RunConfig& config,
                  const Dataset& dataset, const AttackSpec& spec) {
  AttackRun run;
  run.spec = spec;
  run.dataset = dataset.name;
  run.model = env.target()->identity();
  run.outcomes.resize(dataset.samples.size());
  ParallelFor(dataset.samples.size(), config.parallelism, [&](size_t i) {
    run.outcomes[i] = ScoreSample(env, config, spec, dataset.samples[i]);
  });
  for (const Sample& s : dataset.samples) run.labels.push_back(s.label);
  EvaluateRun(run, config.fpr_targets);
  return run;
}

bool TooManyFailures(size_t failures, size_t total) {
  return total > 0 && static_cast<double>(failures) >
                          kMaxFailureFraction * static_cast<double>(total);
}

std::string SummaryLine(const AttackRun& run) {
  if (!run.evaluation.ok()) {
    return absl::StrCat(
        run.spec.name, ": evaluation failed: ", Msg(run.evaluation), " (",
        run.failures, "/", run.outcomes.size(), " samples failed)");
  }
  std::string line =
      absl::StrCat(run.spec.name, ": auc=", FormatDouble(run.report.auc),
                   " bal_acc=", FormatDouble(run.report.balanced_accuracy));
  for (const auto& [target, stat] : run.report.tpr_at_fpr) {
    absl::StrAppend(&line, " tpr@", FormatDouble(target),
                    "fpr=", FormatDouble(stat.value));
  }
  absl::StrAppend(&line, " failed=", run.failures, "/", run.outcomes.size());
  return line;
}

struct Prepared {
  RunConfig config;
  Dataset dataset;
  std::unique_ptr<Environment> env;
};

// Loads, validates and builds everything; prints and returns the exit code
// on failure.
std::optional<Prepared> Prepare(const RunConfig& raw, const RunOptions& options,
                                std::ostream& err, int& exit_code) {
  Prepared p;
  p.config = ApplyOptions(raw, options);
  auto dataset = LoadRunDataset(p.config);
  if (!dataset.ok()) {
    err << "error: " << dataset.status().message() << "\n";
    exit_code = kExitConfigError;
    return std::nullopt;
  }
  p.dataset = *std::move(dataset);
  if (auto st = Preflight(p.config, p.dataset); !st.ok()) {
    err << "error: " << st.message() << "\n";
    exit_code = kExitConfigError;
    return std::nullopt;
  }
  auto env = Environment::Create(p.config, options.offline);
  if (!env.ok()) {
    err << "error: " << env.status().message() << "\n";
    exit_code = kExitConfigError;
    return std::nullopt;
  }
  p.env = *std::move(env);
  return p;
}

std::string SweepHeader(std::string_view axis, std::span<const double> fprs) {
  std::string h = absl::StrCat(std::string(axis), ",auc,balanced_acc");
  for (double f : fprs) absl::StrAppend(&h, ",tpr_at_fpr_", FormatDouble(f));
  absl::StrAppend(&h, ",failures\n");
  return h;
}

struct SweepRow {
  std::string value;
  bool ok = false;
  EvaluationReport report;
  size_t failures = 0;
  std::string error;
};

}  // namespace

RunConfig ApplyOptions(RunConfig config, const RunOptions& options) {
  if (options.seed.has_value()) config.seed = *options.seed;
  if (options.parallelism.has_value())
    config.parallelism = *options.parallelism;
  config.parallelism = std::max(1, config.parallelism);
  return config;
}

absl::StatusOr<std::unique_ptr<Environment>> Environment::Create(
    const RunConfig& config, bool offline) {
  std::unique_ptr<Environment> env(new Environment());
  if (!config.cache_dir.empty()) {
    auto cache = ResponseCache::Open(config.cache_dir);
    if (!cache.ok()) return cache.status();
    env->cache_ = *std::move(cache);
  }
  auto make = [&](const std::optional<OracleConfig>& cfg,
                  std::unique_ptr<Oracle>& slot) -> absl::Status {
    if (!cfg.has_value()) return absl::OkStatus();
    auto oracle = MakeOracle(*cfg);
    if (!oracle.ok()) return oracle.status();
    slot = *std::move(oracle);
    slot->AttachCache(env->cache_.get());
    slot->set_offline(offline);
    return absl::OkStatus();
  };
  if (auto st = make(config.target, env->target_); !st.ok()) return st;
  if (auto st = make(config.surrogate, env->surrogate_); !st.ok()) return st;
  if (auto st = make(config.reference, env->reference_); !st.ok()) return st;
  if (config.embedding.has_value()) {
    EmbeddingProviderConfig emb = *config.embedding;
    if (config.embedding_probe_role.has_value()) {
      const std::string& role = *config.embedding_probe_role;
      emb.probe_oracle = role == "target"      ? env->target_.get()
                         : role == "surrogate" ? env->surrogate_.get()
                         : role == "reference" ? env->reference_.get()
                                               : nullptr;
      if (emb.probe_oracle == nullptr) {
        return absl::InvalidArgumentError(absl::StrCat(
            "embedding probe role \"", role, "\" names no configured oracle"));
      }
    }
    auto provider = MakeEmbeddingProvider(emb);
    if (!provider.ok()) return provider.status();
    env->provider_ = *std::move(provider);
    env->provider_->AttachCache(env->cache_.get());
    env->provider_->set_offline(offline);
  }
  return env;
}

uint64_t Environment::network_requests() const {
  uint64_t total = 0;
  for (const auto* o : {target_.get(), surrogate_.get(), reference_.get()}) {
    if (o != nullptr) total += o->stats().network_requests;
  }
  if (provider_ != nullptr) total += provider_->network_requests();
  return total;
}

absl::StatusOr<Dataset> LoadRunDataset(const RunConfig& config) {
  auto dataset = LoadDataset(config.dataset_path);
  if (!dataset.ok()) return dataset.status();
  if (config.truncate_words.has_value()) {
    return TruncateDataset(*dataset, *config.truncate_words);
  }
  return dataset;
}

absl::Status Preflight(const RunConfig& config, const Dataset& dataset) {
  if (auto st = ValidateForEvaluation(dataset); !st.ok()) return st;
  if (!config.target.has_value()) {
    return absl::InvalidArgumentError("no target oracle configured");
  }
  auto require_logits = [](const std::optional<OracleConfig>& o,
                           std::string_view role,
                           std::string_view attack) -> absl::Status {
    if (!o.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attack \"", std::string(attack), "\" needs a ",
                       std::string(role), " oracle"));
    }
    if (o->capability != Capability::kLogits) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attack \"", std::string(attack),
          "\" needs token log-probabilities "
          "but the ",
          std::string(role), " oracle \"", o->identity, "\" is label-only"));
    }
    return absl::OkStatus();
  };
  auto check_decoding = [&](const DecodingConfig& d, const OracleConfig& o,
                            std::string_view attack) -> absl::Status {
    if (auto st = d.Validate(); !st.ok()) return st;
    if (o.transport == Transport::kHttp &&
        d.strategy == DecodingStrategy::kContrastive &&
        !o.supports_contrastive) {
      return absl::InvalidArgumentError(
          absl::StrCat("attack \"", std::string(attack),
                       "\" uses contrastive search but "
                       "oracle \"",
                       o.identity, "\" does not support it"));
    }
    return absl::OkStatus();
  };
  auto needs_provider = [&](std::string_view attack) -> absl::Status {
    if (!config.embedding.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attack \"", std::string(attack), "\" needs an embedding provider"));
    }
    return absl::OkStatus();
  };

  for (const AttackSpec& spec : config.attacks) {
    const std::string& name = spec.name;
    if (!IsRegisteredAttack(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attack \"", name, "\""));
    }
    if (AttackNeedsLogits(name)) {
      if (auto st = require_logits(config.target, "target", name); !st.ok()) {
        return st;
      }
    }
    if (name == kAttackReference) {
      if (auto st = require_logits(config.reference, "reference", name);
          !st.ok()) {
        return st;
      }
    }
    if (name == kAttackNeighborhood) {
      for (const Sample& s : dataset.samples) {
        if (!s.neighbors.has_value() || s.neighbors->empty()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attack \"neighborhood\" needs neighbors for sample \"", s.id,
              "\""));
        }
      }
    }
    if (name == kAttackPetal) {
      if (auto st = require_logits(config.surrogate, "surrogate", name);
          !st.ok()) {
        return st;
      }
      if (auto st = needs_provider(name); !st.ok()) return st;
      if (auto st = spec.petal.Validate(); !st.ok()) return st;
      if (auto st = check_decoding(spec.petal.decoding, *config.target, name);
          !st.ok()) {
        return st;
      }
    }
    if (IsRobustness(name)) {
      if (spec.robustness.similarity_metric == SimilarityMetric::kSemantic) {
        if (auto st = needs_provider(name); !st.ok()) return st;
      }
      if (auto st = check_decoding(spec.decoding, *config.target, name);
          !st.ok()) {
        return st;
      }
      if (spec.robustness.augmentation != Augmentation::kRandomSwap) {
        const std::string key(AugmentationName(spec.robustness.augmentation));
        for (const Sample& s : dataset.samples) {
          size_t have = 0;
          for (const auto& [k, texts] : s.augmented_inputs) {
            if (AsciiLower(k) == key) have = texts.size();
          }
          if (have < static_cast<size_t>(spec.robustness.num_augmented)) {
            return absl::InvalidArgumentError(absl::StrCat(
                "attack \"", name, "\" needs ", spec.robustness.num_augmented,
                " \"", key, "\" augmentations for sample \"", s.id,
                "\", found ", have));
          }
        }
      }
    }
  }
  if (config.embedding.has_value() &&
      config.embedding->transport == EmbeddingTransport::kProbeAffine &&
      config.embedding_probe_role.has_value()) {
    const std::string& role = *config.embedding_probe_role;
    const std::optional<OracleConfig>& o = role == "target" ? config.target
                                           : role == "surrogate"
                                               ? config.surrogate
                                               : config.reference;
    if (auto st = require_logits(o, role, "embedding probe"); !st.ok()) {
      return st;
    }
  }
  return absl::OkStatus();
}

void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const size_t threads = std::min<size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

void EvaluateRun(AttackRun& run, std::span<const double> fpr_targets) {
  std::vector<double> scores;
  std::vector<MembershipLabel> labels;
  std::vector<SampleError> errors;
  run.failures = 0;
  for (size_t i = 0; i < run.outcomes.size(); ++i) {
    const SampleOutcome& o = run.outcomes[i];
    if (o.score.has_value() && std::isfinite(o.score->score)) {
      scores.push_back(o.score->score);
      labels.push_back(run.labels[i]);
    } else {
      ++run.failures;
      const std::string id =
          o.score.has_value() ? o.score->sample_id : std::string();
      errors.push_back({id, o.error.empty() ? "non-finite score" : o.error});
    }
  }
  auto report = Evaluate(run.spec.name, run.dataset, run.model, scores, labels,
                         fpr_targets);
  run.evaluation = report.status();
  if (report.ok()) run.report = *std::move(report);
  run.report.attack = run.spec.name;
  run.report.dataset = run.dataset;
  run.report.model = run.model;
  run.report.errors = std::move(errors);
  run.report.parameters = SpecParameters(run.spec);
}

AttackRun RunAttack(const Environment& env, const RunConfig& config,
                    const Dataset& dataset, const AttackSpec& spec) {
  if (!IsRobustness(spec.name) || spec.prefix_fraction_set) {
    AttackRun run = RunOnce(env, config, dataset, spec);
    // Sample ids of failures are filled here, where the dataset is known.
    size_t e = 0;
    for (size_t i = 0; i < run.outcomes.size(); ++i) {
      if (!run.outcomes[i].score.has_value()) {
        run.report.errors[e++].sample_id = dataset.samples[i].id;
      } else if (!std::isfinite(run.outcomes[i].score->score)) {
        ++e;
      }
    }
    return run;
  }
  std::optional<AttackRun> best;
  for (int tenth = 1; tenth <= 9; ++tenth) {
    AttackSpec s = spec;
    s.robustness.prefix_fraction = tenth / 10.0;
    s.prefix_fraction_set = true;
    AttackRun run = RunAttack(env, config, dataset, s);
    const bool better =
        !best.has_value() ||
        (run.evaluation.ok() &&
         (!best->evaluation.ok() || run.report.auc > best->report.auc));
    if (better) best = std::move(run);
  }
  best->report.parameters["prefix_sweep"] = "0.1:0.9:0.1";
  return *std::move(best);
}

std::string OutputDirName(std::string_view attack, std::string_view dataset,
                          std::string_view model) {
  std::string name =
      absl::StrCat(std::string(attack), "__", std::string(dataset), "__",
                   std::string(model));
  for (char& c : name) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      c == '.';
    if (!safe) c = '_';
  }
  return name;
}

absl::Status WriteAttackOutputs(const AttackRun& run,
                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::string scores;
  std::string diagnostics;
  for (size_t i = 0; i < run.outcomes.size(); ++i) {
    const SampleOutcome& o = run.outcomes[i];
    if (!o.score.has_value()) continue;
    json row;
    row["id"] = o.score->sample_id;
    row["label"] = std::string(LabelName(run.labels[i]));
    row["score"] = Num(o.score->score);
    absl::StrAppend(&scores, row.dump(), "\n");
    if (!o.diagnostics_json.empty()) {
      absl::StrAppend(&diagnostics, o.diagnostics_json, "\n");
    }
  }
  if (auto st = WriteFile(dir / "report.json", EmitReportJson(run.report));
      !st.ok()) {
    return st;
  }
  if (auto st = WriteFile(dir / "report.csv", EmitReportCsv(run.report));
      !st.ok()) {
    return st;
  }
  if (auto st = WriteFile(dir / "roc.csv", EmitRocCsv(run.report.roc));
      !st.ok()) {
    return st;
  }
  if (auto st = WriteFile(dir / "scores.jsonl", scores); !st.ok()) return st;
  return WriteFile(dir / "diagnostics.jsonl", diagnostics);
}

int CmdRun(const RunConfig& raw, const RunOptions& options, std::ostream& out,
           std::ostream& err) {
  int code = kExitOk;
  auto prepared = Prepare(raw, options, err, code);
  if (!prepared.has_value()) return code;
  const RunConfig& config = prepared->config;
  for (const AttackSpec& spec : config.attacks) {
    AttackRun run = RunAttack(*prepared->env, config, prepared->dataset, spec);
    const std::filesystem::path dir =
        config.output_dir / OutputDirName(spec.name, run.dataset, run.model);
    if (auto st = WriteAttackOutputs(run, dir); !st.ok()) {
      err << "error: " << st.message() << "\n";
      return kExitPartialFailure;
    }
    out << SummaryLine(run) << "\n";
    for (const SampleError& e : run.report.errors) {
      err << "  sample " << e.sample_id << ": " << e.message << "\n";
    }
    if (!run.evaluation.ok() ||
        TooManyFailures(run.failures, run.outcomes.size())) {
      code = kExitPartialFailure;
    }
  }
  out << "network requests: " << prepared->env->network_requests() << "\n";
  return code;
}

std::vector<double> DirichletDraw(uint64_t seed, int draw, size_t k) {
  std::mt19937_64 rng(MixSeed(seed, static_cast<uint64_t>(draw)));
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log1p(-UnitInterval(rng()));
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> LeadingWeights(std::span<const double> weights, size_t m) {
  std::vector<double> out(weights.begin(),
                          weights.begin() + std::min(m, weights.size()));
  out.resize(m, 0.0);
  double total = 0.0;
  for (double x : out) total += x;
  if (!(total > 0.0)) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(m));
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

int CmdSweep(const RunConfig& raw, const RunOptions& options, std::ostream& out,
             std::ostream& err) {
  if (!raw.sweep.has_value()) {
    err << "error: config has no \"sweep\" section\n";
    return kExitConfigError;
  }
  const SweepSpec& sweep = *raw.sweep;
  const auto it =
      std::find_if(raw.attacks.begin(), raw.attacks.end(),
                   [&](const AttackSpec& s) { return s.name == sweep.attack; });
  if (it == raw.attacks.end()) {
    err << "error: sweep attack \"" << sweep.attack
        << "\" is not listed under attacks\n";
    return kExitConfigError;
  }
  const AttackSpec base = *it;
  const bool petal = base.name == kAttackPetal;
  const bool robust = IsRobustness(base.name);
  bool applicable = true;
  bool needs_values = true;
  switch (sweep.axis) {
    case SweepAxis::kBudgetFraction:
    case SweepAxis::kGranularity:
      applicable = petal;
      break;
    case SweepAxis::kDirichletWeights:
      applicable = petal;
      needs_values = false;
      break;
    case SweepAxis::kPrefixFraction:
      applicable = robust;
      break;
    case SweepAxis::kDecoding:
      applicable = petal || robust;
      needs_values = false;
      break;
    case SweepAxis::kTextLength:
      break;
  }
  if (!applicable) {
    err << "error: sweep axis \"" << SweepAxisName(sweep.axis)
        << "\" does not apply to attack \"" << base.name << "\"\n";
    return kExitConfigError;
  }
  if (needs_values && sweep.values.empty()) {
    err << "error: sweep needs a non-empty \"values\" list\n";
    return kExitConfigError;
  }
  if (sweep.axis == SweepAxis::kDecoding && sweep.decodings.empty()) {
    err << "error: decoding sweep needs a non-empty \"decodings\" list\n";
    return kExitConfigError;
  }
  if (sweep.axis == SweepAxis::kDirichletWeights && sweep.num_draws < 1) {
    err << "error: dirichlet sweep needs num_draws >= 1\n";
    return kExitConfigError;
  }
  // Validate every variant before any query.
  std::vector<std::pair<std::string, AttackSpec>> variants;
  std::vector<int> lengths;
  switch (sweep.axis) {
    case SweepAxis::kBudgetFraction:
      for (double v : sweep.values) {
        AttackSpec s = base;
        s.petal.budget_fraction = v;
        variants.emplace_back(FormatDouble(v), s);
      }
      break;
    case SweepAxis::kGranularity:
      for (double v : sweep.values) {
        AttackSpec s = base;
        s.petal.granularity = static_cast<int>(v);
        variants.emplace_back(std::to_string(s.petal.granularity), s);
      }
      break;
    case SweepAxis::kPrefixFraction:
      for (double v : sweep.values) {
        AttackSpec s = base;
        s.robustness.prefix_fraction = v;
        s.prefix_fraction_set = true;
        variants.emplace_back(FormatDouble(v), s);
      }
      break;
    case SweepAxis::kDecoding:
      for (const DecodingConfig& d : sweep.decodings) {
        AttackSpec s = base;
        (petal ? s.petal.decoding : s.decoding) = d;
        variants.emplace_back(d.CanonicalString(), s);
      }
      break;
    case SweepAxis::kTextLength:
      for (double v : sweep.values) {
        if (!(v >= 1.0)) {
          err << "error: text lengths must be positive\n";
          return kExitConfigError;
        }
        lengths.push_back(static_cast<int>(v));
        variants.emplace_back(std::to_string(lengths.back()), base);
      }
      break;
    case SweepAxis::kDirichletWeights: {
      AttackSpec s = base;
      s.petal.budget_fraction = 1.0;
      s.petal.granularity = 1;
      s.petal.weights.reset();
      variants.emplace_back("uniform", s);
      break;
    }
  }
  RunConfig checked = raw;
  checked.attacks.clear();
  for (const auto& [label, s] : variants) checked.attacks.push_back(s);

  int code = kExitOk;
  auto prepared = Prepare(checked, options, err, code);
  if (!prepared.has_value()) return code;
  const RunConfig& config = prepared->config;
  const Environment& env = *prepared->env;

  std::vector<SweepRow> rows;
  auto add_row = [&](std::string value, const AttackRun& run) {
    SweepRow row;
    row.value = std::move(value);
    row.ok = run.evaluation.ok();
    row.report = run.report;
    row.failures = run.failures;
    row.error = row.ok ? "" : Msg(run.evaluation);
    if (!row.ok || TooManyFailures(run.failures, run.outcomes.size())) {
      code = kExitPartialFailure;
    }
    rows.push_back(std::move(row));
  };

  std::string model = env.target()->identity();
  for (size_t v = 0; v < variants.size(); ++v) {
    const auto& [label, spec] = variants[v];
    Dataset dataset = prepared->dataset;
    if (sweep.axis == SweepAxis::kTextLength) {
      auto truncated = TruncateDataset(prepared->dataset, lengths[v]);
      if (!truncated.ok()) {
        err << "error: " << truncated.status().message() << "\n";
        return kExitConfigError;
      }
      dataset = *std::move(truncated);
    }
    AttackRun run = RunAttack(env, config, dataset, spec);
    if (sweep.axis != SweepAxis::kDirichletWeights) {
      add_row(label, run);
      continue;
    }
    // Reweight the cached per-position estimates.
    size_t k = 0;
    for (const SampleOutcome& o : run.outcomes) {
      if (o.petal.has_value()) k = std::max(k, o.petal->target_sims.size());
    }
    add_row("uniform", run);
    for (int d = 0; d < sweep.num_draws; ++d) {
      const std::vector<double> w = DirichletDraw(config.seed, d, k);
      AttackRun weighted = run;
      for (SampleOutcome& o : weighted.outcomes) {
        if (!o.petal.has_value()) continue;
        const auto& sims = o.petal->target_sims;
        auto ppl = ApproxPerplexity(sims, o.petal->params,
                                    LeadingWeights(w, sims.size()));
        if (!ppl.ok()) {
          o.score.reset();
          o.error = Msg(ppl.status());
          continue;
        }
        o.score->score = -ppl->log_value;
      }
      EvaluateRun(weighted, config.fpr_targets);
      add_row(std::to_string(d), weighted);
    }
  }

  std::string csv = SweepHeader(SweepAxisName(sweep.axis), config.fpr_targets);
  json table = json::array();
  for (const SweepRow& row : rows) {
    absl::StrAppend(&csv, row.value);
    json j;
    j["value"] = row.value;
    if (row.ok) {
      absl::StrAppend(&csv, ",", FormatDouble(row.report.auc), ",",
                      FormatDouble(row.report.balanced_accuracy));
      j["auc"] = Num(row.report.auc);
      j["balanced_accuracy"] = Num(row.report.balanced_accuracy);
      json tpr = json::object();
      for (double f : config.fpr_targets) {
        const double t = row.report.tpr_at_fpr.at(f).value;
        absl::StrAppend(&csv, ",", FormatDouble(t));
        tpr[FormatDouble(f)] = Num(t);
      }
      j["tpr_at_fpr"] = std::move(tpr);
    } else {
      absl::StrAppend(&csv, ",,");
      for (size_t i = 0; i < config.fpr_targets.size(); ++i) {
        absl::StrAppend(&csv, ",");
      }
      j["error"] = row.error;
    }
    absl::StrAppend(&csv, ",", row.failures, "\n");
    j["failures"] = row.failures;
    table.push_back(std::move(j));
  }
  json doc;
  doc["attack"] = base.name;
  doc["dataset"] = prepared->dataset.name;
  doc["model"] = model;
  doc["axis"] = std::string(SweepAxisName(sweep.axis));
  doc["rows"] = std::move(table);

  const std::filesystem::path dir =
      config.output_dir /
      absl::StrCat("sweep__",
                   OutputDirName(base.name, prepared->dataset.name, model),
                   "__", std::string(SweepAxisName(sweep.axis)));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return kExitPartialFailure;
  }
  if (auto st = WriteFile(dir / "sweep.csv", csv); !st.ok()) {
    err << "error: " << st.message() << "\n";
    return kExitPartialFailure;
  }
  if (auto st = WriteFile(dir / "sweep.json", doc.dump(2) + "\n"); !st.ok()) {
    err << "error: " << st.message() << "\n";
    return kExitPartialFailure;
  }
  out << csv;
  return code;
}

int CmdRegress(const RunConfig& raw, const RunOptions& options,
               std::ostream& out, std::ostream& err) {
  if (!raw.surrogate.has_value() ||
      raw.surrogate->capability != Capability::kLogits) {
    err << "error: regress needs a logits-capable surrogate oracle\n";
    return kExitConfigError;
  }
  if (!raw.embedding.has_value()) {
    err << "error: regress needs an embedding provider\n";
    return kExitConfigError;
  }
  // Only the surrogate is queried; attacks are not run.
  RunConfig checked = raw;
  checked.attacks.clear();
  int code = kExitOk;
  auto prepared = Prepare(checked, options, err, code);
  if (!prepared.has_value()) return code;
  const RunConfig& config = prepared->config;
  const Dataset& dataset = prepared->dataset;
  Environment& env = *prepared->env;

  DecodingConfig decoding;
  RegressionParams fallback = kDefaultRegressionFallback;
  for (const AttackSpec& s : raw.attacks) {
    if (s.name == kAttackPetal) {
      decoding = s.petal.decoding;
      fallback = s.petal.regression_fallback;
    }
  }
  struct Row {
    std::vector<SimProbPair> pairs;
    RegressionParams params;
    std::optional<double> r;
    std::string error;
  };
  std::vector<Row> rows(dataset.samples.size());
  ParallelFor(dataset.samples.size(), config.parallelism, [&](size_t i) {
    auto pairs = CollectSurrogatePairs(*env.surrogate(), *env.provider(),
                                       dataset.samples[i], decoding);
    if (!pairs.ok()) {
      rows[i].error = Msg(pairs.status());
      return;
    }
    rows[i].pairs = *std::move(pairs);
    rows[i].params = FitRegression(rows[i].pairs, fallback);
    if (auto r = Pearson(rows[i].pairs); r.ok()) rows[i].r = *r;
  });

  std::string lines;
  double sum_slope = 0.0, sum_intercept = 0.0, sum_r = 0.0;
  size_t ok = 0, defined = 0;
  json errors = json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    const Sample& sample = dataset.samples[i];
    if (!row.error.empty()) {
      errors.push_back({{"sample_id", sample.id}, {"message", row.error}});
      err << "  sample " << sample.id << ": " << row.error << "\n";
      continue;
    }
    json pairs = json::array();
    for (const SimProbPair& p : row.pairs) {
      pairs.push_back(json::array({Num(p.similarity), Num(p.logprob)}));
    }
    json j;
    j["id"] = sample.id;
    j["label"] = std::string(LabelName(sample.label));
    j["slope"] = Num(row.params.slope);
    j["intercept"] = Num(row.params.intercept);
    j["pearson"] = row.r.has_value() ? Num(*row.r) : json(nullptr);
    j["n_pairs"] = row.pairs.size();
    j["pairs"] = std::move(pairs);
    absl::StrAppend(&lines, j.dump(), "\n");
    ++ok;
    sum_slope += row.params.slope;
    sum_intercept += row.params.intercept;
    if (row.r.has_value()) {
      ++defined;
      sum_r += *row.r;
    }
  }
  json summary;
  summary["dataset"] = dataset.name;
  summary["surrogate"] = env.surrogate()->identity();
  summary["embedding"] = env.provider()->identity();
  summary["n_samples"] = ok;
  summary["n_failures"] = rows.size() - ok;
  summary["mean_slope"] = ok > 0 ? Num(sum_slope / ok) : json(nullptr);
  summary["mean_intercept"] = ok > 0 ? Num(sum_intercept / ok) : json(nullptr);
  summary["n_pearson_defined"] = defined;
  summary["mean_pearson"] = defined > 0 ? Num(sum_r / defined) : json(nullptr);
  summary["errors"] = std::move(errors);

  const std::filesystem::path dir =
      config.output_dir /
      OutputDirName("regress", dataset.name, env.surrogate()->identity());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return kExitPartialFailure;
  }
  if (auto st = WriteFile(dir / "regression.jsonl", lines); !st.ok()) {
    err << "error: " << st.message() << "\n";
    return kExitPartialFailure;
  }
  if (auto st = WriteFile(dir / "summary.json", summary.dump(2) + "\n");
      !st.ok()) {
    err << "error: " << st.message() << "\n";
    return kExitPartialFailure;
  }
  out << summary.dump(2) << "\n";
  return TooManyFailures(rows.size() - ok, rows.size()) ? kExitPartialFailure
                                                        : kExitOk;
}

int CmdCache(const RunConfig& config, std::string_view subcommand,
             std::ostream& out, std::ostream& err) {
  if (config.cache_dir.empty()) {
    err << "error: config sets no cache_dir\n";
    return kExitConfigError;
  }
  auto cache = ResponseCache::Open(config.cache_dir);
  if (!cache.ok()) {
    err << "error: " << cache.status().message() << "\n";
    return kExitConfigError;
  }
  if (subcommand == "stats") {
    auto stats = (*cache)->Stats();
    if (!stats.ok()) {
      err << "error: " << stats.status().message() << "\n";
      return kExitPartialFailure;
    }
    out << "entries: " << stats->entries << "\n"
        << "bytes: " << stats->total_bytes << "\n";
    return kExitOk;
  }
  if (subcommand == "clear") {
    if (auto st = (*cache)->Clear(); !st.ok()) {
      err << "error: " << st.message() << "\n";
      return kExitPartialFailure;
    }
    out << "cache cleared\n";
    return kExitOk;
  }
  err << "error: unknown cache subcommand \"" << subcommand
      << "\" (expected stats or clear)\n";
  return kExitConfigError;
}

}  // namespace mia
