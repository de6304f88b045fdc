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

#include "shadownet/rng.h"

#include <cmath>
#include <numbers>

namespace shadownet {

namespace {
constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream RngStream::keyed(uint64_t master_seed, std::initializer_list<uint64_t> path) {
    RngStream s(mix64(master_seed ^ 0x5348414457ULL));
    for (uint64_t p : path) {
        s = s.child(p);
    }
    return s;
}

RngStream RngStream::child(uint64_t index) const {
    return RngStream(mix64(key_ + kGamma * (index + 1)) ^ mix64(index ^ 0xA5A5A5A5A5A5A5A5ULL));
}

uint64_t RngStream::next_u64() {
    counter_++;
    return mix64(key_ + kGamma * counter_);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

uint64_t RngStream::below(uint64_t n) {
    // Rejection keeps the draw exactly uniform.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    while (true) {
        uint64_t v = next_u64();
        if (v < limit) {
            return v % n;
        }
    }
}

bool RngStream::bernoulli(double p) {
    return uniform() < p;
}

double RngStream::normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) {
        u1 = 1e-300;
    }
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace shadownet
