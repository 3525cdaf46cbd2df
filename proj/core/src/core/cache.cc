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

#include "mia/core/cache.h"

#include <openssl/evp.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "glog/logging.h"
#include "mia/core/text.h"

namespace mia {
namespace {

constexpr char kMagic[] = "MIACACHE1";
constexpr char kTmpPrefix[] = ".tmp-";

void AppendField(std::string& out, std::string_view field) {
  absl::StrAppend(&out, field.size(), ":");
  out.append(field);
  out.push_back(';');
}

bool IsEntryFile(const std::filesystem::directory_entry& e) {
  if (!e.is_regular_file()) return false;
  const std::string name = e.path().filename().string();
  return name.size() == 64 &&
         name.find_first_not_of("0123456789abcdef") == std::string::npos;
}

template <typename T>
bool ParseInt(const std::string& s, T& out, int base) {
  if (s.empty()) return false;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && end == s.data() + s.size();
}

int64_t NowUnixMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    absl::StrAppendFormat(&hex, "%02x", digest[i]);
  }
  return hex;
}

std::string CacheKey::Hex() const {
  std::string canonical;
  AppendField(canonical, oracle_identity);
  AppendField(canonical, request_kind);
  AppendField(canonical, prefix);
  AppendField(canonical, decoding);
  AppendField(canonical, std::to_string(max_new_tokens));
  return Sha256Hex(canonical);
}

absl::StatusOr<std::unique_ptr<ResponseCache>> ResponseCache::Open(
    std::filesystem::path directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat("cannot create cache directory ",
                                               directory.string(), ": ",
                                               ec.message()));
  }
  return std::unique_ptr<ResponseCache>(
      new ResponseCache(std::move(directory)));
}

std::optional<CacheEntry> ResponseCache::Get(const CacheKey& key) const {
  const std::filesystem::path path = directory_ / key.Hex();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ++misses_;
    return std::nullopt;
  }
  std::string header;
  std::getline(in, header);
  std::istringstream fields(header);
  std::string magic, created_s, size_s, checksum_s, extra;
  fields >> magic >> created_s >> size_s >> checksum_s;
  int64_t created = 0;
  uint64_t size = 0;
  uint64_t checksum = 0;
  if (magic != kMagic || (fields >> extra) ||
      !ParseInt(created_s, created, 10) || !ParseInt(size_s, size, 10) ||
      !ParseInt(checksum_s, checksum, 16)) {
    LOG(WARNING) << "ignoring corrupt cache entry " << path << ": bad header";
    ++misses_;
    return std::nullopt;
  }
  std::string payload(size, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(size));
  if (static_cast<uint64_t>(in.gcount()) != size ||
      in.peek() != std::char_traits<char>::eof() ||
      Fnv1a64(payload) != checksum) {
    LOG(WARNING) << "ignoring corrupt cache entry " << path
                 << ": truncated or checksum mismatch";
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return CacheEntry{std::move(payload), created};
}

absl::Status ResponseCache::Put(const CacheKey& key, const CacheEntry& entry) {
  const std::string name = key.Hex();
  const std::filesystem::path tmp =
      directory_ / absl::StrCat(kTmpPrefix, name, "-", ::getpid(), "-",
                                tmp_counter_.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot write cache file ", tmp.string()));
    }
    out << kMagic << ' ' << entry.created_unix_ms << ' ' << entry.bytes.size()
        << ' ' << absl::StrFormat("%016x", Fnv1a64(entry.bytes)) << '\n';
    out.write(entry.bytes.data(),
              static_cast<std::streamsize>(entry.bytes.size()));
    out.flush();
    if (!out.good()) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      return absl::DataLossError(
          absl::StrCat("short write to cache file ", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, directory_ / name, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    return absl::UnavailableError(
        absl::StrCat("cannot publish cache entry ", name, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::Status ResponseCache::Put(const CacheKey& key, std::string bytes) {
  return Put(key, CacheEntry{std::move(bytes), NowUnixMs()});
}

absl::StatusOr<CacheStats> ResponseCache::Stats() const {
  CacheStats stats;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(directory_, ec)) {
    if (!IsEntryFile(e)) continue;
    ++stats.entries;
    std::error_code size_ec;
    const auto size = e.file_size(size_ec);
    if (!size_ec) stats.total_bytes += size;
  }
  if (ec) {
    return absl::UnavailableError(absl::StrCat("cannot list cache directory ",
                                               directory_.string(), ": ",
                                               ec.message()));
  }
  return stats;
}

absl::Status ResponseCache::Clear() {
  std::error_code ec;
  std::vector<std::filesystem::path> doomed;
  for (const auto& e : std::filesystem::directory_iterator(directory_, ec)) {
    const std::string name = e.path().filename().string();
    if (IsEntryFile(e) || name.starts_with(kTmpPrefix)) {
      doomed.push_back(e.path());
    }
  }
  if (ec) {
    return absl::UnavailableError(absl::StrCat("cannot list cache directory ",
                                               directory_.string(), ": ",
                                               ec.message()));
  }
  for (const auto& path : doomed) {
    std::error_code rm_ec;
    std::filesystem::remove(path, rm_ec);
    if (rm_ec) {
      return absl::UnavailableError(
          absl::StrCat("cannot remove ", path.string(), ": ", rm_ec.message()));
    }
  }
  return absl::OkStatus();
}

}  // namespace mia
