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

#include "mia/metrics/report.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mia/core/text.h"
#include "nlohmann/json.hpp"

namespace mia {
namespace {

using json = nlohmann::ordered_json;

json Number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

absl::StatusOr<double> ReadNumber(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  return absl::DataLossError(absl::StrCat("expected a number, got ", v.dump()));
}

absl::StatusOr<double> ParseKey(const std::string& s) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    return absl::DataLossError(absl::StrCat("bad FPR target key \"", s, "\""));
  }
  return value;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

bool operator==(const EvaluationReport& a, const EvaluationReport& b) {
  auto same = [](double x, double y) {
    return x == y || (std::isnan(x) && std::isnan(y));
  };
  if (a.tpr_at_fpr.size() != b.tpr_at_fpr.size()) return false;
  for (auto ia = a.tpr_at_fpr.begin(), ib = b.tpr_at_fpr.begin();
       ia != a.tpr_at_fpr.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !same(ia->second.value, ib->second.value) ||
        !same(ia->second.threshold, ib->second.threshold)) {
      return false;
    }
  }
  return a.attack == b.attack && a.dataset == b.dataset && a.model == b.model &&
         same(a.auc, b.auc) && same(a.balanced_accuracy, b.balanced_accuracy) &&
         same(a.balanced_accuracy_threshold, b.balanced_accuracy_threshold) &&
         a.roc == b.roc && a.n_members == b.n_members &&
         a.n_nonmembers == b.n_nonmembers && a.errors == b.errors &&
         a.parameters == b.parameters;
}

absl::StatusOr<EvaluationReport> Evaluate(
    std::string attack, std::string dataset, std::string model,
    std::span<const double> scores, std::span<const MembershipLabel> labels,
    std::span<const double> fpr_targets) {
  auto roc = ComputeRoc(scores, labels);
  if (!roc.ok()) return roc.status();
  EvaluationReport report;
  report.attack = std::move(attack);
  report.dataset = std::move(dataset);
  report.model = std::move(model);
  report.roc = *std::move(roc);
  report.auc = Auc(report.roc);
  const ThresholdStat bal = BalancedAccuracy(report.roc);
  report.balanced_accuracy = bal.value;
  report.balanced_accuracy_threshold = bal.threshold;
  for (double target : fpr_targets) {
    report.tpr_at_fpr[target] = TprAtFpr(report.roc, target);
  }
  for (MembershipLabel label : labels) {
    if (label == MembershipLabel::kMember) {
      ++report.n_members;
    } else {
      ++report.n_nonmembers;
    }
  }
  return report;
}

std::string EmitReportJson(const EvaluationReport& report) {
  json out;
  out["report_version"] = kReportVersion;
  out["attack"] = report.attack;
  out["dataset"] = report.dataset;
  out["model"] = report.model;
  out["auc"] = Number(report.auc);
  out["balanced_accuracy"] = Number(report.balanced_accuracy);
  out["balanced_accuracy_threshold"] =
      Number(report.balanced_accuracy_threshold);
  json tpr = json::object();
  for (const auto& [target, stat] : report.tpr_at_fpr) {
    tpr[FormatDouble(target)] = {{"tpr", Number(stat.value)},
                                 {"threshold", Number(stat.threshold)}};
  }
  out["tpr_at_fpr"] = std::move(tpr);
  out["n_members"] = report.n_members;
  out["n_nonmembers"] = report.n_nonmembers;
  json errors = json::array();
  for (const SampleError& e : report.errors) {
    errors.push_back({{"sample_id", e.sample_id}, {"message", e.message}});
  }
  out["errors"] = std::move(errors);
  json params = json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  out["parameters"] = std::move(params);
  json roc = json::array();
  for (const RocPoint& p : report.roc.points) {
    roc.push_back(
        json::array({Number(p.fpr), Number(p.tpr), Number(p.threshold)}));
  }
  out["roc"] = std::move(roc);
  return out.dump(2) + "\n";
}

std::string EmitReportCsv(const EvaluationReport& report) {
  std::string tpr1;
  if (auto it = report.tpr_at_fpr.find(0.01); it != report.tpr_at_fpr.end()) {
    tpr1 = FormatDouble(it->second.value);
  }
  return absl::StrCat(std::string(kReportCsvHeader), "\n",
                      CsvField(report.attack), ",", CsvField(report.dataset),
                      ",", CsvField(report.model), ",",
                      FormatDouble(report.auc), ",",
                      FormatDouble(report.balanced_accuracy), ",", tpr1, "\n");
}

std::string EmitRocCsv(const RocCurve& curve) {
  std::string out = "fpr,tpr,threshold\n";
  for (const RocPoint& p : curve.points) {
    absl::StrAppend(&out, FormatDouble(p.fpr), ",", FormatDouble(p.tpr), ",",
                    FormatDouble(p.threshold), "\n");
  }
  return out;
}

std::string EmitReport(const EvaluationReport& report, ReportFormat format) {
  return format == ReportFormat::kJson ? EmitReportJson(report)
                                       : EmitReportCsv(report);
}

absl::StatusOr<EvaluationReport> ParseReportJson(std::string_view text) {
  const json in = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (in.is_discarded() || !in.is_object()) {
    return absl::DataLossError("report is not a JSON object");
  }
  EvaluationReport report;
  try {
    if (in.at("report_version").get<int>() != kReportVersion) {
      return absl::DataLossError("unsupported report_version");
    }
    report.attack = in.at("attack").get<std::string>();
    report.dataset = in.at("dataset").get<std::string>();
    report.model = in.at("model").get<std::string>();
    auto read = [&](const json& v, double& out) -> absl::Status {
      auto d = ReadNumber(v);
      if (!d.ok()) return d.status();
      out = *d;
      return absl::OkStatus();
    };
    if (auto st = read(in.at("auc"), report.auc); !st.ok()) return st;
    if (auto st = read(in.at("balanced_accuracy"), report.balanced_accuracy);
        !st.ok()) {
      return st;
    }
    if (auto st = read(in.at("balanced_accuracy_threshold"),
                       report.balanced_accuracy_threshold);
        !st.ok()) {
      return st;
    }
    for (const auto& [key, entry] : in.at("tpr_at_fpr").items()) {
      auto target = ParseKey(key);
      if (!target.ok()) return target.status();
      ThresholdStat stat;
      if (auto st = read(entry.at("tpr"), stat.value); !st.ok()) return st;
      if (auto st = read(entry.at("threshold"), stat.threshold); !st.ok()) {
        return st;
      }
      report.tpr_at_fpr[*target] = stat;
    }
    report.n_members = in.at("n_members").get<int>();
    report.n_nonmembers = in.at("n_nonmembers").get<int>();
    for (const json& e : in.at("errors")) {
      report.errors.push_back({e.at("sample_id").get<std::string>(),
                               e.at("message").get<std::string>()});
    }
    for (const auto& [k, v] : in.at("parameters").items()) {
      report.parameters[k] = v.get<std::string>();
    }
    for (const json& p : in.at("roc")) {
      RocPoint point;
      if (auto st = read(p.at(0), point.fpr); !st.ok()) return st;
      if (auto st = read(p.at(1), point.tpr); !st.ok()) return st;
      if (auto st = read(p.at(2), point.threshold); !st.ok()) return st;
      report.roc.points.push_back(point);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("malformed report: ", e.what()));
  }
  return report;
}

}  // namespace mia
