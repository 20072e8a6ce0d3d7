// Copyright 2026 The sparsesim Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace sparsesim {

// Seeded substreams. Every random quantity in the library is a pure function of a 64-bit seed;
// child seeds are derived by hashing (parent, index), never by advancing a shared engine.

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Random engine for one substream.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, 2^bits).
    std::uint64_t bits(int count) {
        if (count <= 0) {
            return 0;
        }
        const std::uint64_t r = engine_();
        return count >= 64 ? r : (r >> (64 - count));
    }

    /// Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r < threshold);
        return r % bound;
    }

   private:
    std::mt19937_64 engine_;
};

namespace detail {

/// Samples per block. Block b of a computation draws from Rng(derive_seed(seed, b)),
/// so block results do not depend on how blocks are scheduled on threads.
inline constexpr std::uint64_t kBlockSize = 1u << 14;

/// Runs `body(block_index, begin, end)` for consecutive blocks covering [0, count) on up to
/// `threads` workers and returns the per-block results in block order.
template <class Result, class Body>
std::vector<Result> run_blocks(std::uint64_t count, unsigned threads, Body&& body) {
    const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
    std::vector<Result> results(static_cast<std::size_t>(blocks));
    auto run_one = [&](std::uint64_t b) {
        const std::uint64_t begin = b * kBlockSize;
        const std::uint64_t end = std::min(count, begin + kBlockSize);
        results[static_cast<std::size_t>(b)] = body(b, begin, end);
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) {
            run_one(b);
        }
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::uint64_t b = next++; b < blocks; b = next++) {
                    run_one(b);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
    return results;
}

}  // namespace detail
}  // namespace sparsesim
