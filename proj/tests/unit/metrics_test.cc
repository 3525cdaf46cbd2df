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

#include "mia/metrics/metrics.h"

#include <cmath>
#include <limits>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "mia/metrics/report.h"
#include "support/brute_force.h"

namespace mia {
namespace {

using ::testing::HasSubstr;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr MembershipLabel kM = MembershipLabel::kMember;
constexpr MembershipLabel kN = MembershipLabel::kNonMember;

struct Instance {
  std::vector<double> scores;
  std::vector<MembershipLabel> labels;
};

// Scores drawn from a small grid so that ties are common.
Instance RandomInstance(std::mt19937_64& rng, int max_size) {
  Instance in;
  const int n = 2 + static_cast<int>(rng() % (max_size - 1));
  for (int i = 0; i < n; ++i) {
    in.labels.push_back(i == 0 ? kM : i == 1 ? kN : (rng() % 2 ? kM : kN));
    in.scores.push_back(static_cast<double>(rng() % 12) / 4.0 +
                        (rng() % 3 == 0 ? 0.1 * (rng() % 7) : 0.0));
  }
  return in;
}

TEST(DecideTest, Examples) {
  EXPECT_EQ(Decide(0.7, 0.5), kM);
  EXPECT_EQ(Decide(0.5, 0.5), kM);
  EXPECT_EQ(Decide(0.3, 0.5), kN);
}

TEST(RocTest, PerfectSeparation) {
  const std::vector<double> s = {1.0, 0.0};
  const std::vector<MembershipLabel> l = {kM, kN};
  auto roc = ComputeRoc(s, l);
  ASSERT_TRUE(roc.ok());
  ASSERT_EQ(roc->points.size(), 3);
  EXPECT_EQ(roc->points[0], (RocPoint{0, 0, kInf}));
  EXPECT_EQ(roc->points[1], (RocPoint{0, 1, 1.0}));
  EXPECT_EQ(roc->points[2], (RocPoint{1, 1, 0.0}));
  EXPECT_EQ(Auc(*roc), 1.0);
  EXPECT_EQ(BalancedAccuracy(*roc).value, 1.0);
}

TEST(RocTest, SingleTieGroup) {
  const std::vector<double> s = {0.3, 0.3, 0.3, 0.3};
  const std::vector<MembershipLabel> l = {kM, kN, kN, kM};
  auto roc = ComputeRoc(s, l);
  ASSERT_EQ(roc->points.size(), 2);
  EXPECT_EQ(roc->points[1].fpr, 1.0);
  EXPECT_EQ(roc->points[1].tpr, 1.0);
  EXPECT_EQ(Auc(*roc), 0.5);
  EXPECT_EQ(BalancedAccuracy(*roc).value, 0.5);
}

TEST(RocTest, RejectsBadInput) {
  const std::vector<double> s = {0.1, 0.2};
  EXPECT_FALSE(ComputeRoc(s, std::vector<MembershipLabel>{kM}).ok());
  EXPECT_FALSE(ComputeRoc(s, std::vector<MembershipLabel>{kM, kM}).ok());
  EXPECT_FALSE(
      ComputeRoc(s, std::vector<MembershipLabel>{kM, MembershipLabel::kUnknown})
          .ok());
  const std::vector<double> nan = {0.1, std::nan("")};
  EXPECT_FALSE(ComputeRoc(nan, std::vector<MembershipLabel>{kM, kN}).ok());
}

TEST(TprAtFprTest, SeparableToy) {
  const std::vector<double> s = {0.9, 0.8, 0.2, 0.1};
  const std::vector<MembershipLabel> l = {kM, kM, kN, kN};
  const ThresholdStat t = TprAtFpr(*ComputeRoc(s, l), 0.01);
  EXPECT_EQ(t.value, 1.0);
  EXPECT_GT(t.threshold, 0.2);
}

TEST(MetricsPropertyTest, MatchesBruteForce) {
  std::mt19937_64 rng(20240917);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = RandomInstance(rng, 50);
    auto roc = ComputeRoc(in.scores, in.labels);
    ASSERT_TRUE(roc.ok());
    const auto ref = brute::Roc(in.scores, in.labels);
    ASSERT_EQ(roc->points.size(), ref.size());
    for (size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(roc->points[i].fpr, ref[i].fpr, 1e-12);
      EXPECT_NEAR(roc->points[i].tpr, ref[i].tpr, 1e-12);
      EXPECT_EQ(roc->points[i].threshold, ref[i].threshold);
    }
    EXPECT_NEAR(Auc(*roc), brute::Auc(in.scores, in.labels), 1e-12);
    EXPECT_NEAR(BalancedAccuracy(*roc).value,
                brute::BalancedAccuracy(in.scores, in.labels), 1e-12);
    for (double f : {0.01, 0.05, 0.2, 0.5}) {
      EXPECT_NEAR(TprAtFpr(*roc, f).value,
                  brute::TprAtFpr(in.scores, in.labels, f), 1e-12);
    }
  }
}

TEST(MetricsPropertyTest, CurveInvariants) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(rng, 80);
    auto roc = ComputeRoc(in.scores, in.labels);
    EXPECT_EQ(roc->points.front().fpr, 0.0);
    EXPECT_EQ(roc->points.front().tpr, 0.0);
    EXPECT_EQ(roc->points.back().fpr, 1.0);
    EXPECT_EQ(roc->points.back().tpr, 1.0);
    for (size_t i = 1; i < roc->points.size(); ++i) {
      EXPECT_GE(roc->points[i].fpr, roc->points[i - 1].fpr);
      EXPECT_GE(roc->points[i].tpr, roc->points[i - 1].tpr);
    }
    const double auc = Auc(*roc);
    EXPECT_GE(auc, 0.0);
    EXPECT_LE(auc, 1.0);
  }
}

TEST(MetricsPropertyTest, BalancedAccuracyThresholdAchievesValue) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(rng, 40);
    const ThresholdStat b = BalancedAccuracy(*ComputeRoc(in.scores, in.labels));
    double p = 0, n = 0, tp = 0, tn = 0;
    for (size_t i = 0; i < in.scores.size(); ++i) {
      const bool member = Decide(in.scores[i], b.threshold) == kM;
      if (in.labels[i] == kM) {
        ++p;
        tp += member;
      } else {
        ++n;
        tn += !member;
      }
    }
    EXPECT_NEAR((tp / p + tn / n) / 2, b.value, 1e-12);
  }
}

TEST(MetricsPropertyTest, TprThresholdRespectsFpr) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(rng, 60);
    const ThresholdStat t = TprAtFpr(*ComputeRoc(in.scores, in.labels), 0.05);
    double n = 0, fp = 0;
    for (size_t i = 0; i < in.scores.size(); ++i) {
      if (in.labels[i] == kN) {
        ++n;
        fp += in.scores[i] >= t.threshold;
      }
    }
    EXPECT_LE(fp / n, 0.05 + 1e-12);
  }
}

EvaluationReport SampleReport() {
  const std::vector<double> s = {0.9, 0.4, 0.4, 0.1, -2.5};
  const std::vector<MembershipLabel> l = {kM, kN, kM, kN, kM};
  const std::vector<double> fprs = {0.01, 0.05};
  auto r = Evaluate("petal", "wiki, \"mia\"", "model-1", s, l, fprs);
  r->errors.push_back({"x7", "timeout"});
  r->parameters["granularity"] = "1";
  return *r;
}

TEST(ReportTest, JsonRoundTrip) {
  const EvaluationReport report = SampleReport();
  const std::string json = EmitReportJson(report);
  EXPECT_THAT(json, HasSubstr("\"report_version\": 1"));
  auto back = ParseReportJson(json);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, report);
  EXPECT_EQ(EmitReportJson(*back), json);
}

TEST(ReportTest, EmissionIsDeterministic) {
  EXPECT_EQ(EmitReport(SampleReport(), ReportFormat::kJson),
            EmitReport(SampleReport(), ReportFormat::kJson));
  EXPECT_EQ(EmitReport(SampleReport(), ReportFormat::kCsv),
            EmitReport(SampleReport(), ReportFormat::kCsv));
}

TEST(ReportTest, CsvLayout) {
  const std::string csv = EmitReportCsv(SampleReport());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "attack,dataset,model,auc,balanced_acc,tpr_at_1pct_fpr");
  EXPECT_THAT(csv, HasSubstr("petal,\"wiki, \"\"mia\"\"\",model-1,"));
}

TEST(ReportTest, RocCsv) {
  const std::string csv = EmitRocCsv(SampleReport().roc);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "fpr,tpr,threshold");
  EXPECT_THAT(csv, HasSubstr("0,0,inf"));
}

TEST(ReportTest, CountsClasses) {
  const EvaluationReport r = SampleReport();
  EXPECT_EQ(r.n_members, 3);
  EXPECT_EQ(r.n_nonmembers, 2);
  EXPECT_EQ(r.tpr_at_fpr.size(), 2);
}

}  // namespace
}  // namespace mia
