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

#ifndef SHADOWNET_PARALLEL_H
#define SHADOWNET_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shadownet {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items are
/// handed out dynamically; callers must write results into per-index slots so
/// the output does not depend on the schedule. The first exception thrown by
/// any item is rethrown on the calling thread.
template <typename Fn>
void parallel_for(size_t count, int workers, Fn &&fn) {
    size_t threads = std::min<size_t>(std::max(workers, 1), count);
    if (threads <= 1) {
        for (size_t i = 0; i < count; i++) {
            fn(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; t++) {
        pool.emplace_back(body);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace shadownet

#endif
