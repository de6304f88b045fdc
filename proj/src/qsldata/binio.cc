// Copyright 2026 The ShadowNet Authors
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

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "shadownet/error.h"
#include "shadownet/qsldata.h"

namespace shadownet::qsldata {

uint32_t crc32(const uint8_t *data, size_t n) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    while (n > 0) {
        uInt chunk = static_cast<uInt>(std::min<size_t>(n, 1u << 30));
        crc = ::crc32(crc, data, chunk);
        data += chunk;
        n -= chunk;
    }
    return static_cast<uint32_t>(crc);
}

std::vector<uint8_t> read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + p.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorKind::Io, "read failed for " + p.string());
    return bytes;
}

void write_file(const std::filesystem::path &p, const std::vector<uint8_t> &bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot create " + p.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + p.string());
}

}  // namespace shadownet::qsldata
