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

#ifndef SHADOWNET_BYTES_H
#define SHADOWNET_BYTES_H

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "shadownet/error.h"

namespace shadownet {

/// Little-endian byte sink.
class ByteWriter {
   public:
    void u8(uint8_t v) {
        buf_.push_back(v);
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; i++) {
            buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; i++) {
            buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
    }
    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void bytes(const void *data, size_t n) {
        const auto *p = static_cast<const uint8_t *>(data);
        buf_.insert(buf_.end(), p, p + n);
    }
    void str(std::string_view s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }

    const std::vector<uint8_t> &data() const {
        return buf_;
    }
    std::vector<uint8_t> take() {
        return std::move(buf_);
    }

   private:
    std::vector<uint8_t> buf_;
};

/// Bounds-checked little-endian reader; truncation raises SchemaViolation.
class ByteReader {
   public:
    ByteReader(const uint8_t *data, size_t size) : data_(data), size_(size) {
    }
    explicit ByteReader(const std::vector<uint8_t> &v) : ByteReader(v.data(), v.size()) {
    }

    uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; i++) {
            v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
        }
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; i++) {
            v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
        }
        return v;
    }
    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    const uint8_t *bytes(size_t n) {
        need(n);
        const uint8_t *p = data_ + pos_;
        pos_ += n;
        return p;
    }
    std::string str() {
        uint64_t n = u64();
        const uint8_t *p = bytes(n);
        return std::string(reinterpret_cast<const char *>(p), n);
    }

    size_t remaining() const {
        return size_ - pos_;
    }
    bool done() const {
        return pos_ == size_;
    }

   private:
    void need(size_t n) const {
        require(n <= size_ - pos_, ErrorKind::SchemaViolation, "record truncated");
    }
    const uint8_t *data_;
    size_t size_;
    size_t pos_ = 0;
};

}  // namespace shadownet

#endif
