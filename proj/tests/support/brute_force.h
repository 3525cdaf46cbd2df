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

#ifndef MIA_TESTS_SUPPORT_BRUTE_FORCE_H_
#define MIA_TESTS_SUPPORT_BRUTE_FORCE_H_

#include <span>
#include <string>
#include <vector>

#include "mia/core/types.h"

// Deliberately naive reimplementations used as test oracles. None of these
// share code with the library.
namespace mia::brute {

struct Point {
  double fpr;
  double tpr;
  double threshold;
};

// Mann-Whitney probability that a random member outscores a random
// non-member, ties counted as one half.
double Auc(std::span<const double> scores,
           std::span<const MembershipLabel> labels);

// (FPR, TPR) of "score >= t" for t = +inf and every distinct score,
// descending.
std::vector<Point> Roc(std::span<const double> scores,
                       std::span<const MembershipLabel> labels);

// Best TPR over every threshold whose FPR stays within the target.
double TprAtFpr(std::span<const double> scores,
                std::span<const MembershipLabel> labels, double fpr_target);

// Best (TPR + TNR) / 2 over every threshold.
double BalancedAccuracy(std::span<const double> scores,
                        std::span<const MembershipLabel> labels);

// log P(token | history) for an add-k n-gram model, computed by scanning the
// raw corpus for every occurrence of the context.
double NGramLogProb(const std::vector<std::vector<std::string>>& corpus,
                    size_t vocab_size, int order, double add_k,
                    const std::vector<std::string>& history,
                    const std::string& token);

// Longest common subsequence length by plain recursion with memo.
size_t Lcs(const std::vector<std::string>& a,
           const std::vector<std::string>& b);

// Least squares through the 2x2 normal equations.
void Ols(std::span<const double> x, std::span<const double> y, double* slope,
         double* intercept);

// Pearson r from raw sums.
double Pearson(std::span<const double> x, std::span<const double> y);

}  // namespace mia::brute

#endif  // MIA_TESTS_SUPPORT_BRUTE_FORCE_H_
