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

#include "mia/oracle/ngram_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::json;

constexpr std::string_view kFormatName = "mia-ngram";
constexpr int kFormatVersion = 1;

uint64_t HistorySeed(uint64_t seed, std::span<const Token> history) {
  uint64_t h = Fnv1a64("");
  for (const Token& t : history) {
    h = Fnv1a64(t, h);
    h = Fnv1a64("\x1f", h);
  }
  return MixSeed(seed, h);
}

}  // namespace

std::string NGramModel::ContextKey(std::span<const int32_t> ids) {
  std::string key;
  key.reserve(ids.size() * 4);
  for (int32_t id : ids) {
    const auto u = static_cast<uint32_t>(id);
    key.push_back(static_cast<char>((u >> 24) & 0xFF));
    key.push_back(static_cast<char>((u >> 16) & 0xFF));
    key.push_back(static_cast<char>((u >> 8) & 0xFF));
    key.push_back(static_cast<char>(u & 0xFF));
  }
  return key;
}

absl::StatusOr<NGramModel> NGramModel::Fit(
    std::span<const std::string> corpus, int order,
    std::span<const std::string> extra_vocab, double add_k) {
  if (corpus.empty()) {
    return absl::InvalidArgumentError("n-gram corpus is empty");
  }
  if (order < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n-gram order must be >= 1, got ", order));
  }
  if (!(add_k >= 0.0) || !std::isfinite(add_k)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "smoothing constant must be finite and >= 0, got ", add_k));
  }
  std::vector<std::vector<std::string>> texts;
  texts.reserve(corpus.size());
  std::set<std::string> vocab;
  for (const std::string& text : corpus) {
    texts.push_back(SplitWords(text));
    vocab.insert(texts.back().begin(), texts.back().end());
  }
  for (const std::string& extra : extra_vocab) {
    for (std::string& w : SplitWords(extra)) vocab.insert(std::move(w));
  }
  if (vocab.empty()) {
    return absl::InvalidArgumentError("n-gram vocabulary is empty");
  }

  NGramModel model;
  model.order_ = order;
  model.add_k_ = add_k;
  model.vocab_.assign(vocab.begin(), vocab.end());
  for (size_t i = 0; i < model.vocab_.size(); ++i) {
    model.index_.emplace(model.vocab_[i], static_cast<int32_t>(i));
  }

  absl::flat_hash_map<std::string, absl::flat_hash_map<int32_t, uint32_t>>
      counts;
  std::vector<int32_t> ids;
  for (const auto& words : texts) {
    ids.clear();
    for (const auto& w : words) ids.push_back(model.index_.at(w));
    for (size_t j = 0; j < ids.size(); ++j) {
      const size_t ctx_len = std::min<size_t>(order - 1, j);
      const std::string key = ContextKey(
          std::span<const int32_t>(ids).subspan(j - ctx_len, ctx_len));
      ++counts[key][ids[j]];
    }
  }
  for (auto& [key, next] : counts) {
    ContextStats stats;
    stats.next.assign(next.begin(), next.end());
    model.contexts_.emplace(key, std::move(stats));
  }
  model.Finalize();
  return model;
}

void NGramModel::Finalize() {
  for (auto& [key, stats] : contexts_) {
    std::sort(stats.next.begin(), stats.next.end());
    stats.total = 0;
    stats.best_id = -1;
    uint32_t best_count = 0;
    for (const auto& [id, count] : stats.next) {
      stats.total += count;
      // Ascending id order makes the first maximum the lexicographic winner.
      if (count > best_count) {
        best_count = count;
        stats.best_id = id;
      }
    }
  }
}

std::optional<int32_t> NGramModel::TokenId(std::string_view token) const {
  auto it = index_.find(absl::string_view(token.data(), token.size()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const NGramModel::ContextStats* NGramModel::FindContext(
    std::span<const Token> history) const {
  const size_t ctx_len = std::min<size_t>(order_ - 1, history.size());
  std::vector<int32_t> ids;
  ids.reserve(ctx_len);
  for (const Token& t : history.subspan(history.size() - ctx_len)) {
    auto id = TokenId(t);
    if (!id.has_value()) return nullptr;
    ids.push_back(*id);
  }
  auto it = contexts_.find(ContextKey(ids));
  if (it == contexts_.end() || it->second.total == 0) return nullptr;
  return &it->second;
}

absl::StatusOr<double> NGramModel::LogProb(std::span<const Token> history,
                                           std::string_view token) const {
  const double v = static_cast<double>(vocab_.size());
  const ContextStats* stats = FindContext(history);
  if (stats == nullptr) return -std::log(v);
  double count = 0.0;
  if (auto id = TokenId(token); id.has_value()) {
    auto it = std::lower_bound(
        stats->next.begin(), stats->next.end(), *id,
        [](const auto& entry, int32_t key) { return entry.first < key; });
    if (it != stats->next.end() && it->first == *id) count = it->second;
  }
  const double numerator = count + add_k_;
  if (numerator <= 0.0) {
    return absl::OutOfRangeError(
        absl::StrCat("token \"", std::string(token),
                     "\" has zero probability under the unsmoothed "
                     "model"));
  }
  return std::log(numerator) -
         std::log(static_cast<double>(stats->total) + add_k_ * v);
}

std::vector<double> NGramModel::Distribution(
    std::span<const Token> history) const {
  const double v = static_cast<double>(vocab_.size());
  const ContextStats* stats = FindContext(history);
  if (stats == nullptr) return std::vector<double>(vocab_.size(), 1.0 / v);
  const double denom = static_cast<double>(stats->total) + add_k_ * v;
  std::vector<double> dist(vocab_.size(), add_k_ / denom);
  for (const auto& [id, count] : stats->next) {
    dist[id] = (static_cast<double>(count) + add_k_) / denom;
  }
  return dist;
}

const Token& NGramModel::GreedyNext(std::span<const Token> history) const {
  const ContextStats* stats = FindContext(history);
  if (stats == nullptr || stats->best_id < 0) return vocab_.front();
  return vocab_[stats->best_id];
}

TokenSequence NGramModel::Generate(std::span<const Token> history,
                                   int max_new_tokens,
                                   const DecodingConfig& decoding) const {
  TokenSequence context(history.begin(), history.end());
  TokenSequence out;
  if (max_new_tokens <= 0) return out;
  out.reserve(max_new_tokens);

  std::mt19937_64 rng(decoding.seed.has_value()
                          ? HistorySeed(*decoding.seed, history)
                          : std::random_device{}());

  // Vocabulary ids ordered by descending probability, ascending id.
  auto ranked = [&](const std::vector<double>& dist) {
    std::vector<int32_t> order(dist.size());
    for (size_t i = 0; i < order.size(); ++i)
      order[i] = static_cast<int32_t>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int32_t a, int32_t b) { return dist[a] > dist[b]; });
    return order;
  };

  for (int step = 0; step < max_new_tokens; ++step) {
    int32_t next_id = 0;
    switch (decoding.strategy) {
      case DecodingStrategy::kGreedy:
        next_id = index_.at(GreedyNext(context));
        break;
      case DecodingStrategy::kNucleus: {
        const std::vector<double> dist = Distribution(context);
        const std::vector<int32_t> order = ranked(dist);
        const double p = decoding.nucleus_p.value_or(1.0);
        double mass = 0.0;
        size_t cut = 0;
        while (cut < order.size()) {
          mass += dist[order[cut]];
          ++cut;
          if (mass >= p - 1e-12) break;
        }
        const double u = UnitInterval(rng()) * mass;
        double acc = 0.0;
        next_id = order[cut - 1];
        for (size_t i = 0; i < cut; ++i) {
          acc += dist[order[i]];
          if (u < acc) {
            next_id = order[i];
            break;
          }
        }
        break;
      }
      case DecodingStrategy::kContrastive: {
        const std::vector<double> dist = Distribution(context);
        const std::vector<int32_t> order = ranked(dist);
        const size_t k = std::min<size_t>(
            std::max(1, decoding.contrastive_k.value_or(1)), order.size());
        const double alpha = decoding.contrastive_alpha.value_or(0.0);
        double best_score = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < k; ++i) {
          const Token& candidate = vocab_[order[i]];
          const bool repeated = std::find(context.begin(), context.end(),
                                          candidate) != context.end();
          const double score =
              (1.0 - alpha) * dist[order[i]] - alpha * (repeated ? 1.0 : 0.0);
          if (score > best_score) {
            best_score = score;
            next_id = order[i];
          }
        }
        break;
      }
    }
    out.push_back(vocab_[next_id]);
    context.push_back(vocab_[next_id]);
  }
  return out;
}

std::string NGramModel::ToJson() const {
  std::vector<const std::pair<const std::string, ContextStats>*> entries;
  entries.reserve(contexts_.size());
  for (const auto& entry : contexts_) entries.push_back(&entry);
  std::sort(entries.begin(), entries.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  json contexts = json::array();
  for (const auto* entry : entries) {
    json ctx = json::array();
    const std::string& key = entry->first;
    for (size_t i = 0; i + 4 <= key.size(); i += 4) {
      const uint32_t id =
          (static_cast<uint32_t>(static_cast<uint8_t>(key[i])) << 24) |
          (static_cast<uint32_t>(static_cast<uint8_t>(key[i + 1])) << 16) |
          (static_cast<uint32_t>(static_cast<uint8_t>(key[i + 2])) << 8) |
          static_cast<uint32_t>(static_cast<uint8_t>(key[i + 3]));
      ctx.push_back(vocab_[id]);
    }
    json next = json::array();
    for (const auto& [id, count] : entry->second.next) {
      next.push_back(json::array({vocab_[id], count}));
    }
    contexts.push_back(
        json{{"context", std::move(ctx)}, {"next", std::move(next)}});
  }
  json doc = {{"format", kFormatName}, {"version", kFormatVersion},
              {"order", order_},       {"add_k", add_k_},
              {"vocab", vocab_},       {"contexts", std::move(contexts)}};
  return doc.dump();
}

absl::StatusOr<NGramModel> NGramModel::FromJson(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("n-gram model: malformed JSON");
  }
  if (doc.value("format", "") != kFormatName ||
      doc.value("version", 0) != kFormatVersion) {
    return absl::InvalidArgumentError(
        "n-gram model: unsupported format or version");
  }
  try {
    NGramModel model;
    model.order_ = doc.at("order").get<int>();
    model.add_k_ = doc.at("add_k").get<double>();
    model.vocab_ = doc.at("vocab").get<std::vector<std::string>>();
    if (model.order_ < 1 || !(model.add_k_ >= 0.0) || model.vocab_.empty()) {
      return absl::InvalidArgumentError("n-gram model: invalid header values");
    }
    if (!std::is_sorted(model.vocab_.begin(), model.vocab_.end()) ||
        std::adjacent_find(model.vocab_.begin(), model.vocab_.end()) !=
            model.vocab_.end()) {
      return absl::InvalidArgumentError(
          "n-gram model: vocabulary must be sorted and unique");
    }
    for (size_t i = 0; i < model.vocab_.size(); ++i) {
      model.index_.emplace(model.vocab_[i], static_cast<int32_t>(i));
    }
    for (const json& ctx : doc.at("contexts")) {
      std::vector<int32_t> ids;
      for (const json& tok : ctx.at("context")) {
        auto id = model.TokenId(tok.get<std::string>());
        if (!id.has_value()) {
          return absl::InvalidArgumentError(
              "n-gram model: context token outside vocabulary");
        }
        ids.push_back(*id);
      }
      if (ids.size() > static_cast<size_t>(model.order_ - 1)) {
        return absl::InvalidArgumentError(
            "n-gram model: context longer than order - 1");
      }
      ContextStats stats;
      for (const json& pair : ctx.at("next")) {
        auto id = model.TokenId(pair.at(0).get<std::string>());
        if (!id.has_value()) {
          return absl::InvalidArgumentError(
              "n-gram model: continuation token outside vocabulary");
        }
        stats.next.emplace_back(*id, pair.at(1).get<uint32_t>());
      }
      model.contexts_.emplace(ContextKey(ids), std::move(stats));
    }
    model.Finalize();
    return model;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("n-gram model: ", e.what()));
  }
}

absl::StatusOr<NGramModel> NGramModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open n-gram model ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

absl::Status NGramModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot write n-gram model ", path.string()));
  }
  out << ToJson();
  return out.good() ? absl::OkStatus()
                    : absl::DataLossError("short write of n-gram model");
}

uint64_t NGramModel::Fingerprint() const { return Fnv1a64(ToJson()); }

}  // namespace mia
