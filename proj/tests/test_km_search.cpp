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

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace sparsesim {
namespace {

MarginalOracle sampled(const SparseDistribution& p) {
    auto sampler = std::make_shared<SparseSampler>(p);
    return sampled_marginal_oracle(p.width(), [sampler](Rng& rng) { return sampler->draw_bits(rng); });
}

std::set<std::uint64_t> listed(const HeavyHitterList& h) {
    std::set<std::uint64_t> s;
    for (const auto& e : h.entries) {
        s.insert(e.x.value());
    }
    return s;
}

TEST(ProbeCount, Examples) {
    EXPECT_EQ(probe_count(10, 0.5), 40u);
    EXPECT_EQ(probe_count(1, 1.0), 2u);
    EXPECT_EQ(probe_count(10, 0.1), 200u);
    EXPECT_EQ(probe_count(3, 0.7), 9u);  // ceil(8.57)
    EXPECT_THROW(probe_count(0, 0.5), InputError);
    EXPECT_THROW(probe_count(3, 0.0), InputError);
}

TEST(KmSearch, PointMass) {
    const BitString star = BitString::parse("10110010");
    const SparseDistribution p(8, {{star, 1.0}});
    const HeavyHitterList h = km_search(sampled(p), 0.5, 0.05, 1);
    ASSERT_EQ(h.entries.size(), 1u);
    EXPECT_EQ(h.entries[0].x, star);
    EXPECT_GE(h.entries[0].estimate, 0.75);
    EXPECT_FALSE(h.halted);
    EXPECT_LE(h.probes, probe_count(8, 0.5));
    EXPECT_EQ(h.probes, 16u);
}

TEST(KmSearch, UniformGivesEmptyList) {
    const HeavyHitterList h = km_search(exact_marginal_oracle(10, std::vector<double>(1024, 1.0 / 1024)), 0.1, 0.05, 1);
    EXPECT_TRUE(h.entries.empty());
    EXPECT_FALSE(h.halted);
}

TEST(KmSearch, ThreeLevelDistribution) {
    const BitString a(6, 5), b(6, 40), c(6, 17);
    const SparseDistribution p(6, {{a, 0.6}, {b, 0.3}, {c, 0.1}});
    const auto dense = p.dense();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const HeavyHitterList h = km_search(sampled(p), 0.25, 0.05, seed);
        const auto s = listed(h);
        EXPECT_TRUE(s.count(a.value()) && s.count(b.value())) << seed;
        EXPECT_FALSE(s.count(c.value())) << seed;
    }
    const HeavyHitterList exact = km_search(exact_marginal_oracle(6, dense), 0.25, 0.05, 0);
    EXPECT_EQ(listed(exact), (std::set<std::uint64_t>{a.value(), b.value()}));
}

TEST(KmSearch, HaltsWhenListTooLong) {
    // An oracle reporting 1 for every prefix keeps all extensions.
    const MarginalOracle always(4, [](const BitString&, const EstimationParams&) {
        return MarginalEstimate{1.0, {1.0, 0.0}, 1, 0, false};
    });
    const HeavyHitterList h = km_search(always, 0.5, 0.05, 0);
    EXPECT_TRUE(h.halted);
    EXPECT_TRUE(h.entries.empty());
    EXPECT_EQ(h.halted_round, 3);  // 2, 4, then 8 > 4
    EXPECT_FALSE(h.probe_cap_reached);
}

TEST(KmSearch, ProbeCapIsEnforced) {
    // Keeps exactly the two prefixes whose bits after the first are all zero, so each round
    // probes four candidates and never exceeds the list bound 2/theta = 2.
    const MarginalOracle two_per_round(10, [](const BitString& y, const EstimationParams&) {
        const double v = (y.value() >> 1) == 0 ? 1.0 : 0.0;
        return MarginalEstimate{v, {v, 0.0}, 1, 0, false};
    });
    const HeavyHitterList h = km_search(two_per_round, 1.0, 0.05, 0);
    EXPECT_TRUE(h.halted);
    EXPECT_TRUE(h.probe_cap_reached);
    EXPECT_EQ(h.probes, probe_count(10, 1.0));
    EXPECT_EQ(h.halted_round, 6);
}

TEST(KmSearch, UsesSearchParameters) {
    std::vector<EstimationParams> seen;
    const MarginalOracle spy(5, [&seen](const BitString&, const EstimationParams& p) {
        seen.push_back(p);
        return MarginalEstimate{};
    });
    km_search(spy, 0.2, 0.1, 9);
    ASSERT_EQ(seen.size(), 2u);
    EXPECT_DOUBLE_EQ(seen[0].epsilon, 0.05);
    EXPECT_DOUBLE_EQ(seen[0].delta, 0.2 * 0.1 / 10.0);
    EXPECT_NE(seen[0].seed, seen[1].seed);
}

TEST(KmSearch, Deterministic) {
    Rng rng(5);
    const SparseDistribution p = testing::random_sparse_distribution(rng, 8, 5);
    const HeavyHitterList a = km_search(sampled(p), 0.1, 0.05, 77);
    const HeavyHitterList b = km_search(sampled(p), 0.1, 0.05, 77, 4);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].x, b.entries[i].x);
        EXPECT_EQ(a.entries[i].estimate, b.entries[i].estimate);
    }
}

TEST(KmSearch, SurvivorsStayBelowListBoundWhenEstimatesAreAccurate) {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 3 + static_cast<int>(rng.below(8));
        const double theta = trial % 2 ? 0.1 : 0.25;
        const SparseDistribution p = testing::random_sparse_distribution(
            rng, k, 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(12, std::uint64_t{1} << k))), 0.0);
        const auto dense = p.dense();
        // Adversarial but accurate: every estimate is off by exactly +theta/4.
        const MarginalOracle biased(k, [&dense, theta](const BitString& y, const EstimationParams&) {
            const double v = std::min(1.0, prefix_mass(dense, y) + theta / 4.0);
            return MarginalEstimate{v, {v, 0.0}, 0, 0, false};
        });
        const HeavyHitterList h = km_search(biased, theta, 0.05, 0);
        EXPECT_FALSE(h.halted);
        for (auto s : h.round_sizes) {
            EXPECT_LE(static_cast<double>(s), 2.0 / theta);
        }
        for (const auto& e : h.entries) {
            EXPECT_GE(p.probability(e.x), theta / 2.0);
        }
        for (const auto& [x, v] : p.entries()) {
            if (v >= theta) {
                EXPECT_TRUE(listed(h).count(x.value()));
            }
        }
    }
}

TEST(KmSearchProperty, SoundAndCompleteOnSampledOracle) {
    Rng rng(404);
    const double pi = 0.05;
    const int trials = 60;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        const int k = 2 + static_cast<int>(rng.below(9));
        const double theta = i % 2 ? 0.25 : 0.1;
        const int support = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(10, std::uint64_t{1} << k)));
        const SparseDistribution p = testing::random_sparse_distribution(rng, k, support, 0.0);
        const HeavyHitterList h = km_search(sampled(p), theta, pi, rng.bits(32));
        ASSERT_LE(h.probes, probe_count(k, theta));
        bool good = !h.halted;
        for (const auto& e : h.entries) {
            good = good && p.probability(e.x) >= theta / 2.0;
        }
        const auto s = listed(h);
        for (const auto& [x, v] : p.entries()) {
            good = good && (v < theta || s.count(x.value()) == 1);
        }
        ok += good ? 1 : 0;
    }
    EXPECT_GE(ok / static_cast<double>(trials), testing::success_floor(pi, trials));
}

}  // namespace
}  // namespace sparsesim
