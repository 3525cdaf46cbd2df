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

#ifndef MIA_EMBED_LEXICAL_H_
#define MIA_EMBED_LEXICAL_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace mia {

// ROUGE-L F1 over whitespace-separated words: with L the longest common
// subsequence length, P = L/|candidate|, R = L/|reference| and
// F = 2PR/(P+R). Returns 0 when either side is empty or L is 0.
double RougeL(std::string_view candidate, std::string_view reference);

// Swaps ceil(fraction * W) distinct word positions, chosen uniformly from a
// generator seeded with `seed`, each with its right neighbor (the left one
// for the last word), applied in ascending position order. Texts with fewer
// than two words are returned unchanged. Output words are single-spaced.
std::string RandomSwapPerturb(std::string_view text, double fraction,
                              uint64_t seed);

}  // namespace mia

#endif  // MIA_EMBED_LEXICAL_H_
