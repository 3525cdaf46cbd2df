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

#ifndef MIA_CORE_TEXT_H_
#define MIA_CORE_TEXT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mia {

// Splits UTF-8 text on any run of Unicode whitespace (White_Space property).
// Invalid UTF-8 bytes are kept inside words.
std::vector<std::string> SplitWords(std::string_view text);

// Like SplitWords, but each word keeps the whitespace that precedes it and
// the last word also keeps any trailing whitespace, so concatenating the
// pieces reproduces `text` exactly. Whitespace-only text yields no pieces.
std::vector<std::string> SplitWordsKeepSpacing(std::string_view text);

// Joins with a single ASCII space.
std::string JoinWords(std::span<const std::string> words);

// Number of words SplitWords would return.
size_t CountWords(std::string_view text);

// 64-bit FNV-1a. Stable across platforms and runs, used wherever a seed or
// identifier must be derived from text.
uint64_t Fnv1a64(std::string_view bytes,
                 uint64_t basis = 0xcbf29ce484222325ULL);

// Mixes two 64-bit values into one (splitmix64 finalizer).
uint64_t MixSeed(uint64_t a, uint64_t b);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double UnitInterval(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ASCII lowercase copy; other bytes are unchanged.
std::string AsciiLower(std::string_view text);

// `text` without leading and trailing ASCII whitespace.
std::string_view StripAscii(std::string_view text);

// Shortest round-trip decimal representation of a double.
std::string FormatDouble(double value);

}  // namespace mia

#endif  // MIA_CORE_TEXT_H_
