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

#ifndef SHADOWNET_RNG_H
#define SHADOWNET_RNG_H

#include <cstdint>
#include <initializer_list>

namespace shadownet {

/// Counter-based random stream. A stream is identified by a 64-bit key and
/// produces splitmix64(key, counter) for counter = 0, 1, ... Child streams are
/// derived by hashing the parent key with an index, so a value drawn for
/// (seed, split, example, snapshot) never depends on how work was scheduled.
class RngStream {
   public:
    explicit RngStream(uint64_t key = 0) : key_(key) {
    }

    /// Stream keyed by a master seed and a path of indices.
    static RngStream keyed(uint64_t master_seed, std::initializer_list<uint64_t> path);

    RngStream child(uint64_t index) const;

    uint64_t key() const {
        return key_;
    }

    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n); n must be positive.
    uint64_t below(uint64_t n);
    bool bernoulli(double p);
    /// Standard normal via Box-Muller (one value per call).
    double normal();

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

uint64_t mix64(uint64_t x);

}  // namespace shadownet

#endif
