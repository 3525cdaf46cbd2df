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

#ifndef MIA_CORE_CACHE_H_
#define MIA_CORE_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mia {

struct CacheKey {
  std::string oracle_identity;
  std::string request_kind;
  std::string prefix;
  std::string decoding;
  int max_new_tokens = 0;

  // Lowercase hex SHA-256 over a length-prefixed encoding of all fields.
  std::string Hex() const;
};

struct CacheEntry {
  std::string bytes;
  int64_t created_unix_ms = 0;

  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

struct CacheStats {
  size_t entries = 0;
  uintmax_t total_bytes = 0;
};

// Content-addressed store: one file per key under `directory`, named by
// CacheKey::Hex(). Writes go to a temporary file that is renamed into place,
// so readers never see a partial entry. Last writer wins.
//
// Thread-safe; several processes may share one directory.
class ResponseCache {
 public:
  static absl::StatusOr<std::unique_ptr<ResponseCache>> Open(
      std::filesystem::path directory);

  // A missing, unreadable or corrupt file is a miss. Corruption is logged.
  std::optional<CacheEntry> Get(const CacheKey& key) const;

  absl::Status Put(const CacheKey& key, const CacheEntry& entry);

  // Convenience: stores `bytes` stamped with the current time.
  absl::Status Put(const CacheKey& key, std::string bytes);

  absl::StatusOr<CacheStats> Stats() const;
  absl::Status Clear();

  const std::filesystem::path& directory() const { return directory_; }
  uint64_t hits() const { return hits_.load(); }
  uint64_t misses() const { return misses_.load(); }

 private:
  explicit ResponseCache(std::filesystem::path directory)
      : directory_(std::move(directory)) {}

  std::filesystem::path directory_;
  mutable std::atomic<uint64_t> hits_{0};
  mutable std::atomic<uint64_t> misses_{0};
  std::atomic<uint64_t> tmp_counter_{0};
};

// Sha256 of `bytes` as lowercase hex.
std::string Sha256Hex(std::string_view bytes);

}  // namespace mia

#endif  // MIA_CORE_CACHE_H_
