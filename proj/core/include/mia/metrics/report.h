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

#ifndef MIA_METRICS_REPORT_H_
#define MIA_METRICS_REPORT_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/core/types.h"
#include "mia/metrics/metrics.h"

namespace mia {

inline constexpr int kReportVersion = 1;
inline constexpr std::string_view kReportCsvHeader =
    "attack,dataset,model,auc,balanced_acc,tpr_at_1pct_fpr";

struct SampleError {
  std::string sample_id;
  std::string message;

  friend bool operator==(const SampleError&, const SampleError&) = default;
};

struct EvaluationReport {
  std::string attack;
  std::string dataset;
  std::string model;
  double auc = 0.0;
  double balanced_accuracy = 0.0;
  double balanced_accuracy_threshold = 0.0;
  // FPR target -> (TPR, threshold).
  std::map<double, ThresholdStat> tpr_at_fpr;
  RocCurve roc;
  int n_members = 0;
  int n_nonmembers = 0;
  std::vector<SampleError> errors;
  // Free-form run parameters (e.g. sweep value, prefix fraction).
  std::map<std::string, std::string> parameters;

  friend bool operator==(const EvaluationReport& a, const EvaluationReport& b);
};

// Computes every statistic for one attack.
absl::StatusOr<EvaluationReport> Evaluate(
    std::string attack, std::string dataset, std::string model,
    std::span<const double> scores, std::span<const MembershipLabel> labels,
    std::span<const double> fpr_targets);

enum class ReportFormat { kJson, kCsv };

std::string EmitReport(const EvaluationReport& report, ReportFormat format);
std::string EmitReportJson(const EvaluationReport& report);
// Header row plus one data row.
std::string EmitReportCsv(const EvaluationReport& report);
// "fpr,tpr,threshold" rows.
std::string EmitRocCsv(const RocCurve& curve);

absl::StatusOr<EvaluationReport> ParseReportJson(std::string_view json);

}  // namespace mia

#endif  // MIA_METRICS_REPORT_H_
