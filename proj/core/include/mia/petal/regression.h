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

#ifndef MIA_PETAL_REGRESSION_H_
#define MIA_PETAL_REGRESSION_H_

#include <span>

#include "absl/status/statusor.h"

namespace mia {

// One scored surrogate position: similarity of the greedy next token to the
// actual token, and the actual token's log-probability.
struct SimProbPair {
  double similarity = 0.0;
  double logprob = 0.0;

  friend bool operator==(const SimProbPair&, const SimProbPair&) = default;
};

// logprob ~ slope * similarity + intercept.
struct RegressionParams {
  double slope = 0.0;
  double intercept = 0.0;

  double Predict(double similarity) const {
    return slope * similarity + intercept;
  }

  friend bool operator==(const RegressionParams&,
                         const RegressionParams&) = default;
};

// Typical magnitudes for a small surrogate on natural text.
inline constexpr RegressionParams kDefaultRegressionFallback{3.83, -0.78};

// Ordinary least squares of logprob on similarity.
//
// Empty input returns `fallback`. If the sample variance of the similarities
// is below 1e-12 (including a single pair) the result is the constant
// predictor (slope 0, intercept = mean logprob).
RegressionParams FitRegression(
    std::span<const SimProbPair> pairs,
    RegressionParams fallback = kDefaultRegressionFallback);

// Sample Pearson correlation between similarity and logprob. Fails with
// InvalidArgument for fewer than two pairs or zero variance in either
// coordinate.
absl::StatusOr<double> Pearson(std::span<const SimProbPair> pairs);

}  // namespace mia

#endif  // MIA_PETAL_REGRESSION_H_
