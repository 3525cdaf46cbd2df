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

#ifndef MIA_CORE_DATASET_H_
#define MIA_CORE_DATASET_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/core/types.h"

namespace mia {

enum class DatasetFormat { kJsonLines };

// JSON Lines schema, one object per line:
//   {"id": "s1", "text": "...", "label": 1 | 0 | "member" | "nonmember",
//    "neighbors": ["..."], "augmented": {"ws": ["..."], "bt": ["..."]}}
// "id", "neighbors" and "augmented" are optional. Missing ids become the
// 1-based line number. Blank lines are skipped but still counted.
absl::StatusOr<Dataset> ParseDataset(std::string_view contents,
                                     std::string name);

// Dataset name defaults to the file stem.
absl::StatusOr<Dataset> LoadDataset(
    const std::filesystem::path& path,
    DatasetFormat format = DatasetFormat::kJsonLines);

std::string SerializeDataset(const Dataset& dataset);

absl::Status SaveDataset(const Dataset& dataset,
                         const std::filesystem::path& path,
                         DatasetFormat format = DatasetFormat::kJsonLines);

// Keeps the first `n_words` words joined by single spaces. Texts with at most
// `n_words` words are left untouched. Neighbors and augmentations get the same
// treatment.
Sample TruncateWords(const Sample& sample, int n_words);

// Applies TruncateWords to every sample and records the limit.
absl::StatusOr<Dataset> TruncateDataset(const Dataset& dataset, int n_words);

// Rejects datasets with Unknown labels or without both classes.
absl::Status ValidateForEvaluation(const Dataset& dataset);

}  // namespace mia

#endif  // MIA_CORE_DATASET_H_
