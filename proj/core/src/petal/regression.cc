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

#include "mia/petal/regression.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"

namespace mia {
namespace {

struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

Moments Centered(std::span<const SimProbPair> pairs) {
  Moments m;
  const double n = static_cast<double>(pairs.size());
  for (const SimProbPair& p : pairs) {
    m.mean_x += p.similarity;
    m.mean_y += p.logprob;
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (const SimProbPair& p : pairs) {
    const double dx = p.similarity - m.mean_x;
    const double dy = p.logprob - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace

RegressionParams FitRegression(std::span<const SimProbPair> pairs,
                               RegressionParams fallback) {
  if (pairs.empty()) return fallback;
  const Moments m = Centered(pairs);
  if (pairs.size() < 2 ||
      m.sxx / static_cast<double>(pairs.size() - 1) < 1e-12) {
    return RegressionParams{0.0, m.mean_y};
  }
  const double slope = m.sxy / m.sxx;
  return RegressionParams{slope, m.mean_y - slope * m.mean_x};
}

absl::StatusOr<double> Pearson(std::span<const SimProbPair> pairs) {
  if (pairs.size() < 2) {
    return absl::InvalidArgumentError("correlation needs at least two pairs");
  }
  const auto constant = [&](auto field) {
    return std::all_of(pairs.begin(), pairs.end(), [&](const SimProbPair& p) {
      return p.*field == pairs.front().*field;
    });
  };
  const Moments m = Centered(pairs);
  if (constant(&SimProbPair::similarity) || constant(&SimProbPair::logprob) ||
      !(m.sxx > 0.0) || !(m.syy > 0.0)) {
    return absl::InvalidArgumentError(
        "correlation is undefined: zero variance");
  }
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

}  // namespace mia
