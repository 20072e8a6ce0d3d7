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
#include <cmath>
#include <cstdint>
#include <vector>

#include "sparsesim/bitstring.hpp"
#include "sparsesim/estimator.hpp"
#include "sparsesim/marginals.hpp"

namespace sparsesim {

struct HeavyHitter {
    BitString x;
    double estimate = 0.0;
};

/// Output of the prefix search for large probabilities.
struct HeavyHitterList {
    std::vector<HeavyHitter> entries;
    double theta = 0.0;
    double pi = 0.0;
    /// Set when a round kept more than 2/theta prefixes or the probe budget ran out;
    /// entries is then empty.
    bool halted = false;
    bool probe_cap_reached = false;
    /// Round m (1-based) in which the search halted, 0 otherwise.
    int halted_round = 0;
    std::uint64_t probes = 0;
    std::uint64_t samples = 0;
    std::uint64_t anomalies = 0;
    /// Round sizes |L_1| ... |L_k| (up to the halting round).
    std::vector<std::size_t> round_sizes;
};

/// Hard cap ceil(2k/theta) on marginal-oracle calls.
inline std::uint64_t probe_count(int k, double theta) {
    if (k < 1) {
        throw InputError("probe_count: k must be positive");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw InputError("probe_count: theta must lie in (0, 1]");
    }
    const double cap = 2.0 * k / theta;
    // Round away representation noise such as 2*10/0.1 = 200.00000000000003.
    return static_cast<std::uint64_t>(std::ceil(cap * (1.0 - 1e-12)));
}

/// Finds every k-bit string with p(x) >= theta, none with p(x) < theta/2, w.p. >= 1 - pi.
///
/// `oracle(prefix, params)` must return a MarginalEstimate whose probability is an additive
/// approximation of the prefix marginal. Each call is made at accuracy theta/4 and failure
/// theta*pi/(2k) with seed derive_seed(seed, call index). Round m extends the survivors of
/// round m-1 (ascending integer view, bit 0 before bit 1) and keeps candidates estimated at
/// >= 3theta/4.
template <class Oracle>
HeavyHitterList km_search(const Oracle& oracle, int k, double theta, double pi, std::uint64_t seed,
                          unsigned threads = 1) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw InputError("km_search: theta must lie in (0, 1]");
    }
    if (!(pi > 0.0 && pi < 1.0)) {
        throw InputError("km_search: pi must lie in (0, 1)");
    }
    const std::uint64_t cap = probe_count(k, theta);
    const double accuracy = theta / 4.0;
    const double failure = theta * pi / (2.0 * k);
    const double keep = 3.0 * theta / 4.0;
    const double list_limit = 2.0 / theta;

    HeavyHitterList out;
    out.theta = theta;
    out.pi = pi;
    std::vector<HeavyHitter> survivors{HeavyHitter{BitString(0, 0), 1.0}};
    for (int m = 1; m <= k; ++m) {
        std::vector<HeavyHitter> next;
        for (const auto& s : survivors) {
            for (int u = 0; u <= 1; ++u) {
                if (out.probes >= cap) {
                    out.halted = true;
                    out.probe_cap_reached = true;
                    out.halted_round = m;
                    out.entries.clear();
                    return out;
                }
                const BitString candidate = s.x.extended(u);
                const EstimationParams params{accuracy, failure, derive_seed(seed, out.probes), threads};
                const MarginalEstimate e = oracle(candidate, params);
                ++out.probes;
                out.samples += e.samples;
                out.anomalies += e.anomalies;
                if (e.probability >= keep) {
                    next.push_back({candidate, e.probability});
                }
            }
        }
        out.round_sizes.push_back(next.size());
        if (static_cast<double>(next.size()) > list_limit) {
            out.halted = true;
            out.halted_round = m;
            out.entries.clear();
            return out;
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.x.value() < b.x.value(); });
        survivors = std::move(next);
    }
    out.entries = std::move(survivors);
    return out;
}

inline HeavyHitterList km_search(const MarginalOracle& oracle, double theta, double pi, std::uint64_t seed,
                                 unsigned threads = 1) {
    return km_search(oracle, oracle.width(), theta, pi, seed, threads);
}

}  // namespace sparsesim
