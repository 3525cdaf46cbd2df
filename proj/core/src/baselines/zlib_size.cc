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

#include "mia/baselines/zlib_size.h"

#include <vector>

#include "glog/logging.h"
#include "zlib.h"

namespace mia {

size_t ZlibCompressedSize(std::string_view bytes) {
  uLongf out_len = compressBound(static_cast<uLong>(bytes.size()));
  std::vector<Bytef> out(out_len);
  const int rc = compress2(
      out.data(), &out_len, reinterpret_cast<const Bytef*>(bytes.data()),
      static_cast<uLong>(bytes.size()), Z_DEFAULT_COMPRESSION);
  CHECK_EQ(rc, Z_OK) << "compress2 failed with a bound-sized buffer";
  return out_len;
}

}  // namespace mia
