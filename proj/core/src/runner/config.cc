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

#include "mia/runner/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "mia/baselines/attack_score.h"
#include "mia/core/text.h"
#include "yaml-cpp/yaml.h"

namespace mia {
namespace {

absl::Status ConfigError(const YAML::Node& node, absl::string_view message) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) {
    return absl::InvalidArgumentError(std::string(message));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("config line ", mark.line + 1, ": ", std::string(message)));
}

// Rejects keys of `node` outside `allowed`.
absl::Status CheckKeys(const YAML::Node& node, std::string_view section,
                       std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) {
    return ConfigError(
        node, absl::StrCat("\"", std::string(section), "\" must be a mapping"));
  }
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) {
      return ConfigError(kv.first, absl::StrCat("unknown key \"", key, "\" in ",
                                                std::string(section)));
    }
  }
  return absl::OkStatus();
}

template <typename T>
absl::Status Read(const YAML::Node& parent, const char* key, T& out) {
  const YAML::Node node = parent[key];
  if (!node) return absl::OkStatus();
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    return ConfigError(node, absl::StrCat("invalid value for \"", key, "\""));
  }
  return absl::OkStatus();
}

template <typename T>
absl::Status ReadOptional(const YAML::Node& parent, const char* key,
                          std::optional<T>& out) {
  if (!parent[key]) return absl::OkStatus();
  T value{};
  if (auto st = Read(parent, key, value); !st.ok()) return st;
  out = value;
  return absl::OkStatus();
}

#define MIA_RETURN_IF_ERROR(expr)                         \
  do {                                                    \
    if (absl::Status _st = (expr); !_st.ok()) return _st; \
  } while (0)

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

absl::StatusOr<DecodingConfig> ParseDecoding(const YAML::Node& node) {
  MIA_RETURN_IF_ERROR(
      CheckKeys(node, "decoding", {"strategy", "p", "top_k", "alpha", "seed"}));
  DecodingConfig out;
  std::string strategy = "greedy";
  MIA_RETURN_IF_ERROR(Read(node, "strategy", strategy));
  auto parsed = ParseDecodingStrategy(strategy);
  if (!parsed.ok()) return ConfigError(node, parsed.status().message());
  out.strategy = *parsed;
  MIA_RETURN_IF_ERROR(ReadOptional(node, "p", out.nucleus_p));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "top_k", out.contrastive_k));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "alpha", out.contrastive_alpha));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "seed", out.seed));
  if (auto st = out.Validate(); !st.ok())
    return ConfigError(node, st.message());
  return out;
}

absl::StatusOr<OracleConfig> ParseOracle(const YAML::Node& node,
                                         std::string_view role,
                                         const std::filesystem::path& base) {
  MIA_RETURN_IF_ERROR(CheckKeys(
      node, role,
      {"identity", "transport", "capability", "model_path", "endpoint_url",
       "api_key_env", "timeout_ms", "max_parallel_requests", "max_attempts",
       "initial_backoff_ms", "supports_contrastive"}));
  OracleConfig out;
  std::string transport = "mock_ngram";
  std::string capability = "logits";
  MIA_RETURN_IF_ERROR(Read(node, "identity", out.identity));
  MIA_RETURN_IF_ERROR(Read(node, "transport", transport));
  MIA_RETURN_IF_ERROR(Read(node, "capability", capability));
  auto t = ParseTransport(transport);
  if (!t.ok()) return ConfigError(node, t.status().message());
  out.transport = *t;
  auto c = ParseCapability(capability);
  if (!c.ok()) return ConfigError(node, c.status().message());
  out.capability = *c;
  MIA_RETURN_IF_ERROR(ReadOptional(node, "endpoint_url", out.endpoint_url));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "api_key_env", out.api_key_env_var));
  int64_t timeout_ms = out.request_timeout.count();
  MIA_RETURN_IF_ERROR(Read(node, "timeout_ms", timeout_ms));
  out.request_timeout = std::chrono::milliseconds(timeout_ms);
  MIA_RETURN_IF_ERROR(
      Read(node, "max_parallel_requests", out.max_parallel_requests));
  MIA_RETURN_IF_ERROR(Read(node, "max_attempts", out.retry.max_attempts));
  int64_t backoff_ms = out.retry.initial_backoff.count();
  MIA_RETURN_IF_ERROR(Read(node, "initial_backoff_ms", backoff_ms));
  out.retry.initial_backoff = std::chrono::milliseconds(backoff_ms);
  MIA_RETURN_IF_ERROR(
      Read(node, "supports_contrastive", out.supports_contrastive));

  if (out.transport == Transport::kMockNGram) {
    std::string model_path;
    MIA_RETURN_IF_ERROR(Read(node, "model_path", model_path));
    if (model_path.empty()) {
      return ConfigError(node, absl::StrCat(std::string(role),
                                            ": mock oracle needs model_path"));
    }
    auto model = NGramModel::Load(Resolve(base, model_path));
    if (!model.ok()) return ConfigError(node, model.status().message());
    out.mock_model = std::make_shared<const NGramModel>(*std::move(model));
    if (out.identity.empty()) {
      const std::string file =
          std::filesystem::path(model_path).filename().string();
      out.identity = file.substr(0, file.find('.'));
    }
  }
  if (auto st = out.Validate(); !st.ok())
    return ConfigError(node, st.message());
  return out;
}

absl::StatusOr<EmbeddingProviderConfig> ParseEmbedding(
    const YAML::Node& node, std::optional<std::string>& probe_role) {
  MIA_RETURN_IF_ERROR(
      CheckKeys(node, "embedding",
                {"identity", "transport", "dimension", "seed", "endpoint_url",
                 "api_key_env", "timeout_ms", "max_parallel_requests",
                 "max_attempts", "slope", "intercept", "probe"}));
  EmbeddingProviderConfig out;
  std::string transport = "mock_hash";
  MIA_RETURN_IF_ERROR(Read(node, "transport", transport));
  auto t = ParseEmbeddingTransport(transport);
  if (!t.ok()) return ConfigError(node, t.status().message());
  out.transport = *t;
  MIA_RETURN_IF_ERROR(Read(node, "identity", out.identity));
  MIA_RETURN_IF_ERROR(Read(node, "dimension", out.dimension));
  MIA_RETURN_IF_ERROR(Read(node, "seed", out.seed));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "endpoint_url", out.endpoint_url));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "api_key_env", out.api_key_env_var));
  int64_t timeout_ms = out.request_timeout.count();
  MIA_RETURN_IF_ERROR(Read(node, "timeout_ms", timeout_ms));
  out.request_timeout = std::chrono::milliseconds(timeout_ms);
  MIA_RETURN_IF_ERROR(
      Read(node, "max_parallel_requests", out.max_parallel_requests));
  MIA_RETURN_IF_ERROR(Read(node, "max_attempts", out.retry.max_attempts));
  MIA_RETURN_IF_ERROR(Read(node, "slope", out.probe_slope));
  MIA_RETURN_IF_ERROR(Read(node, "intercept", out.probe_intercept));
  MIA_RETURN_IF_ERROR(ReadOptional(node, "probe", probe_role));
  if (auto st = out.Validate(); !st.ok())
    return ConfigError(node, st.message());
  return out;
}

absl::StatusOr<AttackSpec> ParseAttack(const YAML::Node& node) {
  AttackSpec spec;
  if (node.IsScalar()) {
    spec.name = node.as<std::string>();
  } else {
    if (!node.IsMap() || !node["name"]) {
      return ConfigError(node, "each attack needs a name");
    }
    spec.name = node["name"].as<std::string>();
  }
  if (!IsRegisteredAttack(spec.name)) {
    return ConfigError(node,
                       absl::StrCat("unknown attack \"", spec.name, "\""));
  }
  if (node.IsScalar()) {
    if (spec.name.rfind("robustness-", 0) == 0) {
      spec.robustness.augmentation = *ParseAugmentation(
          spec.name.substr(std::string("robustness-").size()));
    }
    return spec;
  }

  if (spec.name == kAttackPetal) {
    MIA_RETURN_IF_ERROR(
        CheckKeys(node, spec.name,
                  {"name", "budget_fraction", "granularity", "decoding",
                   "regression_fallback", "weights"}));
    MIA_RETURN_IF_ERROR(
        Read(node, "budget_fraction", spec.petal.budget_fraction));
    MIA_RETURN_IF_ERROR(Read(node, "granularity", spec.petal.granularity));
    if (node["decoding"]) {
      auto d = ParseDecoding(node["decoding"]);
      if (!d.ok()) return d.status();
      spec.petal.decoding = *d;
    }
    if (const YAML::Node fb = node["regression_fallback"]) {
      MIA_RETURN_IF_ERROR(
          CheckKeys(fb, "regression_fallback", {"slope", "intercept"}));
      MIA_RETURN_IF_ERROR(
          Read(fb, "slope", spec.petal.regression_fallback.slope));
      MIA_RETURN_IF_ERROR(
          Read(fb, "intercept", spec.petal.regression_fallback.intercept));
    }
    std::vector<double> weights;
    if (node["weights"]) {
      MIA_RETURN_IF_ERROR(Read(node, "weights", weights));
      spec.petal.weights = weights;
    }
    if (auto st = spec.petal.Validate(); !st.ok()) {
      return ConfigError(node, st.message());
    }
  } else if (spec.name == kAttackMinK) {
    MIA_RETURN_IF_ERROR(CheckKeys(node, spec.name, {"name", "k_percent"}));
    MIA_RETURN_IF_ERROR(Read(node, "k_percent", spec.mink.k_percent));
    if (auto st = spec.mink.Validate(); !st.ok()) {
      return ConfigError(node, st.message());
    }
  } else if (spec.name == kAttackZlib) {
    MIA_RETURN_IF_ERROR(CheckKeys(node, spec.name, {"name", "variant"}));
    std::string variant = "perplexity";
    MIA_RETURN_IF_ERROR(Read(node, "variant", variant));
    if (variant == "perplexity") {
      spec.zlib.variant = ZlibVariant::kPerplexity;
    } else if (variant == "log_perplexity") {
      spec.zlib.variant = ZlibVariant::kLogPerplexity;
    } else {
      return ConfigError(node,
                         "zlib variant must be perplexity or "
                         "log_perplexity");
    }
  } else if (spec.name.rfind("robustness-", 0) == 0) {
    MIA_RETURN_IF_ERROR(CheckKeys(node, spec.name,
                                  {"name", "prefix_fraction", "num_augmented",
                                   "similarity", "swap_fraction", "decoding"}));
    RobustnessConfig& r = spec.robustness;
    r.augmentation =
        *ParseAugmentation(spec.name.substr(std::string("robustness-").size()));
    if (node["prefix_fraction"]) {
      MIA_RETURN_IF_ERROR(Read(node, "prefix_fraction", r.prefix_fraction));
      spec.prefix_fraction_set = true;
    }
    MIA_RETURN_IF_ERROR(Read(node, "num_augmented", r.num_augmented));
    MIA_RETURN_IF_ERROR(Read(node, "swap_fraction", r.swap_fraction));
    std::string metric = "semantic";
    MIA_RETURN_IF_ERROR(Read(node, "similarity", metric));
    auto m = ParseSimilarityMetric(metric);
    if (!m.ok()) return ConfigError(node, m.status().message());
    r.similarity_metric = *m;
    if (node["decoding"]) {
      auto d = ParseDecoding(node["decoding"]);
      if (!d.ok()) return d.status();
      spec.decoding = *d;
    }
    if (auto st = r.Validate(); !st.ok())
      return ConfigError(node, st.message());
  } else {
    MIA_RETURN_IF_ERROR(CheckKeys(node, spec.name, {"name"}));
  }
  return spec;
}

absl::StatusOr<SweepSpec> ParseSweep(const YAML::Node& node) {
  MIA_RETURN_IF_ERROR(CheckKeys(
      node, "sweep", {"attack", "axis", "values", "decodings", "num_draws"}));
  SweepSpec out;
  std::string axis;
  MIA_RETURN_IF_ERROR(Read(node, "attack", out.attack));
  MIA_RETURN_IF_ERROR(Read(node, "axis", axis));
  auto a = ParseSweepAxis(axis);
  if (!a.ok()) return ConfigError(node, a.status().message());
  out.axis = *a;
  MIA_RETURN_IF_ERROR(Read(node, "values", out.values));
  MIA_RETURN_IF_ERROR(Read(node, "num_draws", out.num_draws));
  if (const YAML::Node ds = node["decodings"]) {
    if (!ds.IsSequence()) return ConfigError(ds, "decodings must be a list");
    for (const YAML::Node& d : ds) {
      auto parsed = ParseDecoding(d);
      if (!parsed.ok()) return parsed.status();
      out.decodings.push_back(*parsed);
    }
  }
  return out;
}

absl::StatusOr<RunConfig> ParseRoot(const YAML::Node& root,
                                    const std::filesystem::path& base) {
  MIA_RETURN_IF_ERROR(
      CheckKeys(root, "config",
                {"dataset", "oracles", "embedding", "attacks", "metrics",
                 "cache_dir", "parallelism", "seed", "output_dir", "sweep"}));
  RunConfig cfg;

  const YAML::Node dataset = root["dataset"];
  if (!dataset) return ConfigError(root, "missing \"dataset\" section");
  MIA_RETURN_IF_ERROR(
      CheckKeys(dataset, "dataset", {"path", "truncate_words"}));
  std::string path;
  MIA_RETURN_IF_ERROR(Read(dataset, "path", path));
  if (path.empty()) return ConfigError(dataset, "dataset.path is required");
  cfg.dataset_path = Resolve(base, path);
  MIA_RETURN_IF_ERROR(
      ReadOptional(dataset, "truncate_words", cfg.truncate_words));
  if (cfg.truncate_words.has_value() && *cfg.truncate_words < 1) {
    return ConfigError(dataset, "truncate_words must be positive");
  }

  if (const YAML::Node oracles = root["oracles"]) {
    MIA_RETURN_IF_ERROR(
        CheckKeys(oracles, "oracles", {"target", "surrogate", "reference"}));
    for (auto [key, slot] : {std::pair{"target", &cfg.target},
                             std::pair{"surrogate", &cfg.surrogate},
                             std::pair{"reference", &cfg.reference}}) {
      if (const YAML::Node n = oracles[key]) {
        auto parsed = ParseOracle(n, key, base);
        if (!parsed.ok()) return parsed.status();
        *slot = *std::move(parsed);
      }
    }
  }
  if (const YAML::Node emb = root["embedding"]) {
    auto parsed = ParseEmbedding(emb, cfg.embedding_probe_role);
    if (!parsed.ok()) return parsed.status();
    cfg.embedding = *std::move(parsed);
  }

  const YAML::Node attacks = root["attacks"];
  if (!attacks || !attacks.IsSequence() || attacks.size() == 0) {
    return ConfigError(root, "\"attacks\" must be a non-empty list");
  }
  std::set<std::string> seen;
  for (const YAML::Node& a : attacks) {
    auto spec = ParseAttack(a);
    if (!spec.ok()) return spec.status();
    if (!seen.insert(spec->name).second) {
      return ConfigError(
          a, absl::StrCat("attack \"", spec->name, "\" listed twice"));
    }
    cfg.attacks.push_back(*std::move(spec));
  }

  if (const YAML::Node metrics = root["metrics"]) {
    MIA_RETURN_IF_ERROR(CheckKeys(metrics, "metrics", {"fpr_targets"}));
    MIA_RETURN_IF_ERROR(Read(metrics, "fpr_targets", cfg.fpr_targets));
    for (double f : cfg.fpr_targets) {
      if (!(f > 0.0 && f < 1.0)) {
        return ConfigError(metrics, "fpr_targets must lie in (0, 1)");
      }
    }
  }
  std::string cache_dir;
  MIA_RETURN_IF_ERROR(Read(root, "cache_dir", cache_dir));
  if (!cache_dir.empty()) cfg.cache_dir = Resolve(base, cache_dir);
  std::string output_dir = cfg.output_dir.string();
  MIA_RETURN_IF_ERROR(Read(root, "output_dir", output_dir));
  cfg.output_dir = Resolve(base, output_dir);
  MIA_RETURN_IF_ERROR(Read(root, "parallelism", cfg.parallelism));
  if (cfg.parallelism < 1) {
    return ConfigError(root["parallelism"], "parallelism must be positive");
  }
  MIA_RETURN_IF_ERROR(Read(root, "seed", cfg.seed));
  if (const YAML::Node sweep = root["sweep"]) {
    auto parsed = ParseSweep(sweep);
    if (!parsed.ok()) return parsed.status();
    cfg.sweep = *std::move(parsed);
  }
  return cfg;
}

}  // namespace

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBudgetFraction:
      return "budget";
    case SweepAxis::kGranularity:
      return "granularity";
    case SweepAxis::kPrefixFraction:
      return "prefix";
    case SweepAxis::kTextLength:
      return "textlength";
    case SweepAxis::kDecoding:
      return "decoding";
    case SweepAxis::kDirichletWeights:
      return "dirichlet";
  }
  return "budget";
}

absl::StatusOr<SweepAxis> ParseSweepAxis(std::string_view name) {
  const std::string lower = AsciiLower(name);
  if (lower == "budget" || lower == "budget_fraction") {
    return SweepAxis::kBudgetFraction;
  }
  if (lower == "granularity") return SweepAxis::kGranularity;
  if (lower == "prefix" || lower == "prefix_fraction") {
    return SweepAxis::kPrefixFraction;
  }
  if (lower == "textlength" || lower == "text_length") {
    return SweepAxis::kTextLength;
  }
  if (lower == "decoding") return SweepAxis::kDecoding;
  if (lower == "dirichlet" || lower == "dirichlet_weights") {
    return SweepAxis::kDirichletWeights;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown sweep axis \"", std::string(name), "\""));
}

absl::StatusOr<RunConfig> ParseRunConfig(
    std::string_view yaml, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config is not valid YAML: ", e.what()));
  }
  try {
    return ParseRoot(root, base_dir);
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid config: ", e.what()));
  }
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot read config ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(buffer.str(), path.parent_path());
}

}  // namespace mia
