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

#ifndef MIA_BASELINES_ZLIB_SIZE_H_
#define MIA_BASELINES_ZLIB_SIZE_H_

#include <cstddef>
#include <string_view>

namespace mia {

// Length in bytes of the zlib stream (header, DEFLATE data and Adler-32
// trailer) produced for `bytes` at the default compression level.
size_t ZlibCompressedSize(std::string_view bytes);

}  // namespace mia

#endif  // MIA_BASELINES_ZLIB_SIZE_H_
