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

#include "support/brute_force.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace mia::brute {
namespace {

bool IsMember(MembershipLabel l) { return l == MembershipLabel::kMember; }

std::vector<double> Thresholds(std::span<const double> scores) {
  std::set<double, std::greater<>> distinct(scores.begin(), scores.end());
  std::vector<double> t = {std::numeric_limits<double>::infinity()};
  t.insert(t.end(), distinct.begin(), distinct.end());
  return t;
}

void Rates(std::span<const double> scores,
           std::span<const MembershipLabel> labels, double t, double* fpr,
           double* tpr) {
  double p = 0, n = 0, tp = 0, fp = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= t;
    if (IsMember(labels[i])) {
      ++p;
      tp += predicted;
    } else {
      ++n;
      fp += predicted;
    }
  }
  *fpr = fp / n;
  *tpr = tp / p;
}

}  // namespace

double Auc(std::span<const double> scores,
           std::span<const MembershipLabel> labels) {
  double wins = 0, pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!IsMember(labels[i])) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (IsMember(labels[j])) continue;
      pairs += 1;
      if (scores[i] > scores[j]) wins += 1;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

std::vector<Point> Roc(std::span<const double> scores,
                       std::span<const MembershipLabel> labels) {
  std::vector<Point> out;
  for (double t : Thresholds(scores)) {
    Point p{0, 0, t};
    Rates(scores, labels, t, &p.fpr, &p.tpr);
    out.push_back(p);
  }
  return out;
}

double TprAtFpr(std::span<const double> scores,
                std::span<const MembershipLabel> labels, double fpr_target) {
  double best = 0;
  for (double t : Thresholds(scores)) {
    double fpr, tpr;
    Rates(scores, labels, t, &fpr, &tpr);
    if (fpr <= fpr_target) best = std::max(best, tpr);
  }
  return best;
}

double BalancedAccuracy(std::span<const double> scores,
                        std::span<const MembershipLabel> labels) {
  double best = 0;
  for (double t : Thresholds(scores)) {
    double fpr, tpr;
    Rates(scores, labels, t, &fpr, &tpr);
    best = std::max(best, (tpr + 1.0 - fpr) / 2.0);
  }
  return best;
}

double NGramLogProb(const std::vector<std::vector<std::string>>& corpus,
                    size_t vocab_size, int order, double add_k,
                    const std::vector<std::string>& history,
                    const std::string& token) {
  const size_t ctx_len = std::min<size_t>(order - 1, history.size());
  const std::vector<std::string> ctx(history.end() - ctx_len, history.end());
  double c_h = 0, c_ht = 0;
  for (const auto& text : corpus) {
    for (size_t j = 0; j < text.size(); ++j) {
      if (std::min<size_t>(order - 1, j) != ctx_len) continue;
      bool match = true;
      for (size_t k = 0; k < ctx_len; ++k) {
        if (text[j - ctx_len + k] != ctx[k]) match = false;
      }
      if (!match) continue;
      c_h += 1;
      if (text[j] == token) c_ht += 1;
    }
  }
  if (c_h == 0) return std::log(1.0 / static_cast<double>(vocab_size));
  return std::log((c_ht + add_k) / (c_h + add_k * vocab_size));
}

size_t Lcs(const std::vector<std::string>& a,
           const std::vector<std::string>& b) {
  std::map<std::pair<size_t, size_t>, size_t> memo;
  std::function<size_t(size_t, size_t)> go = [&](size_t i, size_t j) -> size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    size_t r = a[i] == b[j] ? 1 + go(i + 1, j + 1)
                            : std::max(go(i + 1, j), go(i, j + 1));
    memo[{i, j}] = r;
    return r;
  };
  return go(0, 0);
}

void Ols(std::span<const double> x, std::span<const double> y, double* slope,
         double* intercept) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  *slope = (n * sxy - sx * sy) / det;
  *intercept = (sxx * sy - sx * sxy) / det;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) /
         std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace mia::brute
