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

#ifndef MIA_METRICS_METRICS_H_
#define MIA_METRICS_METRICS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/core/types.h"

namespace mia {

// Member iff score >= tau.
MembershipLabel Decide(double score, double tau);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Samples with score >= threshold are predicted members at this point.
  double threshold = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

// Step curve from (0, 0) at threshold +inf to (1, 1), one point per
// distinct score in descending order. Equal scores cross together.
struct RocCurve {
  std::vector<RocPoint> points;

  friend bool operator==(const RocCurve&, const RocCurve&) = default;
};

// Fails on mismatched lengths, non-finite scores, Unknown labels or a
// single-class input.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const MembershipLabel> labels);

// Trapezoidal area under the curve.
double Auc(const RocCurve& curve);

struct ThresholdStat {
  double value = 0.0;
  double threshold = 0.0;
};

// Highest TPR among curve points with FPR <= target, without interpolation.
ThresholdStat TprAtFpr(const RocCurve& curve, double fpr_target);

// max over thresholds of (TPR + TNR) / 2. The threshold is the midpoint
// between the chosen score and the next lower distinct score (+inf or -inf
// at the ends). Ties keep the highest threshold.
ThresholdStat BalancedAccuracy(const RocCurve& curve);

}  // namespace mia

#endif  // MIA_METRICS_METRICS_H_
