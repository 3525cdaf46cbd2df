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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace mia {

MembershipLabel Decide(double score, double tau) {
  return score >= tau ? MembershipLabel::kMember : MembershipLabel::kNonMember;
}

absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const MembershipLabel> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(scores.size(), " scores but ", labels.size(), " labels"));
  }
  size_t positives = 0;
  size_t negatives = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError("scores must be finite");
    }
    switch (labels[i]) {
      case MembershipLabel::kMember:
        ++positives;
        break;
      case MembershipLabel::kNonMember:
        ++negatives;
        break;
      case MembershipLabel::kUnknown:
        return absl::InvalidArgumentError(
            "evaluation labels must be member or non-member");
    }
  }
  if (positives == 0 || negatives == 0) {
    return absl::InvalidArgumentError(
        "evaluation needs at least one member and one non-member");
  }

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  size_t tp = 0;
  size_t fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]] == MembershipLabel::kMember) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives, s});
  }
  return curve;
}

double Auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

ThresholdStat TprAtFpr(const RocCurve& curve, double fpr_target) {
  ThresholdStat best{0.0, std::numeric_limits<double>::infinity()};
  for (const RocPoint& p : curve.points) {
    if (p.fpr <= fpr_target && p.tpr > best.value) {
      best = {p.tpr, p.threshold};
    }
  }
  return best;
}

ThresholdStat BalancedAccuracy(const RocCurve& curve) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  ThresholdStat best{-1.0, kInf};
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const RocPoint& p = curve.points[i];
    const double acc = (p.tpr + 1.0 - p.fpr) / 2.0;
    if (acc > best.value) {
      double tau = kInf;
      if (i > 0) {
        tau = i + 1 < curve.points.size()
                  ? (p.threshold + curve.points[i + 1].threshold) / 2.0
                  : -kInf;
      }
      best = {acc, tau};
    }
  }
  return best;
}

}  // namespace mia
