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

#include "mia/core/dataset.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::json;

absl::StatusOr<MembershipLabel> LabelFromJson(const json& value) {
  if (value.is_null()) return MembershipLabel::kUnknown;
  if (value.is_boolean()) {
    return value.get<bool>() ? MembershipLabel::kMember
                             : MembershipLabel::kNonMember;
  }
  if (value.is_number_integer()) {
    const auto v = value.get<int64_t>();
    if (v == 1) return MembershipLabel::kMember;
    if (v == 0) return MembershipLabel::kNonMember;
    if (v == -1) return MembershipLabel::kUnknown;
    return absl::InvalidArgumentError(absl::StrCat("label out of range: ", v));
  }
  if (value.is_string()) return ParseLabel(value.get<std::string>());
  return absl::InvalidArgumentError(
      absl::StrCat("label has unsupported type: ", value.dump()));
}

absl::StatusOr<std::vector<std::string>> StringList(const json& value,
                                                    std::string_view field) {
  if (!value.is_array()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "\"", std::string(field), "\" must be an array of strings"));
  }
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "\"", std::string(field), "\" must contain only strings"));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

absl::StatusOr<Sample> SampleFromJson(const json& obj, size_t line_number) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError("line is not a JSON object");
  }
  Sample sample;
  auto text_it = obj.find("text");
  if (text_it == obj.end() || !text_it->is_string()) {
    return absl::InvalidArgumentError("missing string field \"text\"");
  }
  sample.text = text_it->get<std::string>();
  if (CountWords(sample.text) == 0) {
    return absl::InvalidArgumentError("\"text\" is empty");
  }
  auto label_it = obj.find("label");
  if (label_it == obj.end()) {
    return absl::InvalidArgumentError("missing field \"label\"");
  }
  auto label = LabelFromJson(*label_it);
  if (!label.ok()) return label.status();
  sample.label = *label;

  if (auto id_it = obj.find("id"); id_it != obj.end() && !id_it->is_null()) {
    if (id_it->is_string()) {
      sample.id = id_it->get<std::string>();
    } else if (id_it->is_number_integer()) {
      sample.id = std::to_string(id_it->get<int64_t>());
    } else {
      return absl::InvalidArgumentError("\"id\" must be a string or integer");
    }
  } else {
    sample.id = std::to_string(line_number);
  }

  if (auto it = obj.find("neighbors"); it != obj.end() && !it->is_null()) {
    auto neighbors = StringList(*it, "neighbors");
    if (!neighbors.ok()) return neighbors.status();
    if (neighbors->empty()) {
      return absl::InvalidArgumentError("\"neighbors\" must not be empty");
    }
    for (const auto& n : *neighbors) {
      if (CountWords(n) == 0) {
        return absl::InvalidArgumentError("empty neighbor text");
      }
    }
    sample.neighbors = *std::move(neighbors);
  }

  if (auto it = obj.find("augmented"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("\"augmented\" must be an object");
    }
    for (const auto& [name, list] : it->items()) {
      auto texts = StringList(list, "augmented");
      if (!texts.ok()) return texts.status();
      sample.augmented_inputs[name] = *std::move(texts);
    }
  }
  return sample;
}

json LabelToJson(MembershipLabel label) {
  switch (label) {
    case MembershipLabel::kMember:
      return 1;
    case MembershipLabel::kNonMember:
      return 0;
    case MembershipLabel::kUnknown:
      return "unknown";
  }
  return nullptr;
}

std::string TruncateText(const std::string& text, int n_words) {
  auto words = SplitWords(text);
  if (words.size() <= static_cast<size_t>(n_words)) return text;
  words.resize(n_words);
  return JoinWords(words);
}

}  // namespace

std::string_view LabelName(MembershipLabel label) {
  switch (label) {
    case MembershipLabel::kMember:
      return "member";
    case MembershipLabel::kNonMember:
      return "nonmember";
    case MembershipLabel::kUnknown:
      return "unknown";
  }
  return "unknown";
}

absl::StatusOr<MembershipLabel> ParseLabel(std::string_view text) {
  const std::string lower = AsciiLower(text);
  if (lower == "member" || lower == "1") return MembershipLabel::kMember;
  if (lower == "nonmember" || lower == "non-member" || lower == "0") {
    return MembershipLabel::kNonMember;
  }
  if (lower == "unknown") return MembershipLabel::kUnknown;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown label: ", std::string(text)));
}

absl::StatusOr<Dataset> ParseDataset(std::string_view contents,
                                     std::string name) {
  Dataset dataset;
  dataset.name = std::move(name);
  std::unordered_set<std::string> seen_ids;
  size_t line_number = 0;
  size_t pos = 0;
  while (pos <= contents.size()) {
    size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (StripAscii(line).empty()) {
      if (end == contents.size()) break;
      continue;
    }
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": malformed JSON"));
    }
    auto sample = SampleFromJson(obj, line_number);
    if (!sample.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": ", sample.status().message()));
    }
    if (!seen_ids.insert(sample->id).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": duplicate sample id \"", sample->id, "\""));
    }
    dataset.samples.push_back(*std::move(sample));
    if (end == contents.size()) break;
  }
  return dataset;
}

absl::StatusOr<Dataset> LoadDataset(const std::filesystem::path& path,
                                    DatasetFormat format) {
  (void)format;  // JSON Lines is the only format.
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open dataset file ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDataset(buffer.str(), path.stem().string());
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out;
  for (const Sample& s : dataset.samples) {
    json obj = json::object();
    obj["id"] = s.id;
    obj["text"] = s.text;
    obj["label"] = LabelToJson(s.label);
    if (s.neighbors.has_value()) obj["neighbors"] = *s.neighbors;
    if (!s.augmented_inputs.empty()) {
      json aug = json::object();
      for (const auto& [name, texts] : s.augmented_inputs) aug[name] = texts;
      obj["augmented"] = std::move(aug);
    }
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

absl::Status SaveDataset(const Dataset& dataset,
                         const std::filesystem::path& path,
                         DatasetFormat format) {
  (void)format;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot write dataset file ", path.string()));
  }
  out << SerializeDataset(dataset);
  if (!out.good()) {
    return absl::DataLossError(absl::StrCat("short write to ", path.string()));
  }
  return absl::OkStatus();
}

Sample TruncateWords(const Sample& sample, int n_words) {
  Sample out = sample;
  if (n_words < 1) return out;
  out.text = TruncateText(sample.text, n_words);
  if (out.neighbors.has_value()) {
    for (auto& n : *out.neighbors) n = TruncateText(n, n_words);
  }
  for (auto& [name, texts] : out.augmented_inputs) {
    for (auto& t : texts) t = TruncateText(t, n_words);
  }
  return out;
}

absl::StatusOr<Dataset> TruncateDataset(const Dataset& dataset, int n_words) {
  if (n_words < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("word truncation must be positive, got ", n_words));
  }
  Dataset out;
  out.name = dataset.name;
  out.word_truncation = n_words;
  out.samples.reserve(dataset.samples.size());
  for (const Sample& s : dataset.samples) {
    out.samples.push_back(TruncateWords(s, n_words));
  }
  return out;
}

absl::Status ValidateForEvaluation(const Dataset& dataset) {
  size_t members = 0;
  size_t nonmembers = 0;
  for (const Sample& s : dataset.samples) {
    switch (s.label) {
      case MembershipLabel::kMember:
        ++members;
        break;
      case MembershipLabel::kNonMember:
        ++nonmembers;
        break;
      case MembershipLabel::kUnknown:
        return absl::InvalidArgumentError(absl::StrCat(
            "sample \"", s.id, "\" has an unknown membership label"));
    }
  }
  if (members == 0 || nonmembers == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("evaluation needs both classes; got ", members,
                     " members and ", nonmembers, " non-members"));
  }
  return absl::OkStatus();
}

}  // namespace mia
