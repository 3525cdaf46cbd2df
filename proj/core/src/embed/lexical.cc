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

#include "mia/embed/lexical.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mia/core/text.h"

namespace mia {

double RougeL(std::string_view candidate, std::string_view reference) {
  const std::vector<std::string> c = SplitWords(candidate);
  const std::vector<std::string> r = SplitWords(reference);
  if (c.empty() || r.empty()) return 0.0;
  std::vector<int> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
  for (size_t i = 1; i <= c.size(); ++i) {
    for (size_t j = 1; j <= r.size(); ++j) {
      cur[j] = c[i - 1] == r[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[r.size()];
  if (lcs == 0) return 0.0;
  const double p = lcs / c.size();
  const double rec = lcs / r.size();
  return 2.0 * p * rec / (p + rec);
}

std::string RandomSwapPerturb(std::string_view text, double fraction,
                              uint64_t seed) {
  std::vector<std::string> words = SplitWords(text);
  const size_t n = words.size();
  if (n < 2) return std::string(text);
  const double want = std::ceil(std::clamp(fraction, 0.0, 1.0) * n - 1e-9);
  const size_t k = std::min(n, static_cast<size_t>(std::max(0.0, want)));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(UnitInterval(rng()) *
                                             static_cast<double>(n - i));
    std::swap(order[i], order[std::min(j, n - 1)]);
  }
  std::vector<size_t> chosen(order.begin(), order.begin() + k);
  std::sort(chosen.begin(), chosen.end());
  for (size_t pos : chosen) {
    const size_t other = pos + 1 < n ? pos + 1 : pos - 1;
    std::swap(words[pos], words[other]);
  }
  return JoinWords(words);
}

}  // namespace mia
