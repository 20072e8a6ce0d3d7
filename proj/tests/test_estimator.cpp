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

#include "support.hpp"

namespace sparsesim {
namespace {

CTState uniform(int n) { return function_state(n, boolean_function::constant()); }

TEST(SampleCounts, ChernoffFormula) {
    EXPECT_EQ(chernoff_sample_count(0.1, 0.04), 1843u);
    EXPECT_EQ(chernoff_sample_count(1.0, 0.5), 9u);  // ceil(4 ln 8) = ceil(8.318)
}

TEST(SampleCounts, OverlapFormula) {
    // ceil(1600 ln 160) = ceil(8120.36)
    EXPECT_EQ(overlap_sample_count(0.1, 0.05), 8121u);
    const Estimate e = overlap(uniform(2), uniform(2), {0.1, 0.05, 1, 1});
    EXPECT_EQ(e.samples_used, 2u * 8121u);
}

TEST(SampleCounts, RejectsBadParameters) {
    EXPECT_THROW(chernoff_sample_count(0.0, 0.1), InputError);
    EXPECT_THROW(chernoff_sample_count(0.1, 1.0), InputError);
    EXPECT_THROW(overlap_sample_count(0.1, 0.0), InputError);
}

TEST(ChernoffMean, ConstantFunction) {
    const Estimate e = chernoff_mean([](Rng& r) { return r.bits(3); }, [](std::uint64_t) { return 0.5; },
                                     EstimationParams{0.2, 0.1, 3, 1});
    EXPECT_DOUBLE_EQ(e.value.real(), 0.5);
    EXPECT_EQ(e.samples_used, chernoff_sample_count(0.2, 0.1));
}

TEST(ChernoffMean, SignOfFairCoinStatistical) {
    const int trials = 500;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        const Estimate e = chernoff_mean([](Rng& r) { return r.bits(1); },
                                         [](std::uint64_t x) { return x ? -1.0 : 1.0; },
                                         EstimationParams{0.1, 0.05, static_cast<std::uint64_t>(i), 1});
        ok += std::abs(e.value) <= 0.1 ? 1 : 0;
    }
    EXPECT_GE(ok / 500.0, testing::success_floor(0.05, trials));
}

TEST(ChernoffMean, ThreadCountDoesNotChangeResult) {
    auto run = [](unsigned threads) {
        return chernoff_mean([](Rng& r) { return r.bits(4); },
                             [](std::uint64_t x) { return std::polar(1.0, 0.3 * static_cast<double>(x)); },
                             EstimationParams{0.01, 0.01, 42, threads});
    };
    const Estimate a = run(1);
    const Estimate b = run(4);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.samples_used, b.samples_used);
}

TEST(Overlap, IdenticalBasisStates) {
    const CTState s = basis_state(BitString::parse("0110"));
    const Estimate e = overlap(s, s, {0.1, 0.05, 0, 1});
    EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-12);
    EXPECT_EQ(e.anomalies, 0u);
}

TEST(Overlap, BasisAgainstUniform) {
    const Estimate e = overlap(basis_state(BitString::parse("00")), uniform(2), {0.1, 0.05, 5, 1});
    EXPECT_LE(std::abs(e.value - 0.5), 0.1);
}

TEST(Overlap, OrthogonalFunctionStates) {
    const CTState g = function_state(3, boolean_function::parity(0b001));
    EXPECT_NEAR(std::abs(dense_overlap(uniform(3), g)), 0.0, 1e-15);
    const Estimate e = overlap(uniform(3), g, {0.1, 0.05, 9, 1});
    EXPECT_LE(std::abs(e.value), 0.1);
}

TEST(Overlap, WidthMismatchThrows) {
    EXPECT_THROW(overlap(uniform(2), uniform(3), {}), InputError);
}

TEST(OverlapWithOp, IdentityEqualsOverlap) {
    const CTState a = uniform(3);
    const CTState b = function_state(3, boolean_function::parity(0b110));
    const EstimationParams p{0.1, 0.05, 4, 1};
    EXPECT_EQ(overlap_with_op(a, BasisPreservingOp::identity(3), b, p).value, overlap(a, b, p).value);
}

TEST(OverlapWithOp, XOnZeroIsOrthogonal) {
    const CTState z = basis_state(BitString::parse("0"));
    const Estimate e = overlap_with_op(z, weyl_shift_op(0, 1, 1).power_op(1), z, {0.1, 0.05, 1, 1});
    EXPECT_NEAR(std::abs(e.value), 0.0, 1e-15);
}

TEST(OverlapWithOp, UniformIsShiftInvariantUpToPhase) {
    const CTState u = uniform(3);
    const WeylShift w(3, 2, 3, +1);
    for (std::uint64_t power = 0; power < 4; ++power) {
        const CTState image = operator_image(w.power_op(power), u);
        const Amplitude exact = dense_overlap(u, image);
        EXPECT_NEAR(std::abs(exact - w.phase(power)), 0.0, 1e-12);
        const Estimate e = overlap(u, image, {0.1, 0.05, power, 1});
        EXPECT_LE(std::abs(e.value - exact), 0.1);
    }
}

TEST(PartialOverlap, ZeroProjectorOnZeroState) {
    const CTState z1 = basis_state(BitString::parse("0"));
    const CTState z3 = basis_state(BitString::parse("000"));
    const Estimate e = partial_overlap(z3, z1, z1, z3, {0.1, 0.05, 0, 1});
    EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-12);
}

TEST(PartialOverlap, HalfOfUniform) {
    const CTState z1 = basis_state(BitString::parse("0"));
    EXPECT_NEAR(std::abs(dense_partial_overlap(uniform(2), z1, z1, uniform(2)) - 0.5), 0.0, 1e-15);
    const Estimate e = partial_overlap(uniform(2), z1, z1, uniform(2), {0.1, 0.05, 2, 1});
    EXPECT_LE(std::abs(e.value - 0.5), 0.1);
}

CTState random_product(Rng& rng, int n) {
    std::vector<std::array<Amplitude, 2>> q;
    for (int i = 0; i < n; ++i) {
        const Mat2 u = testing::random_unitary(rng);
        q.push_back({u[0][0], u[1][0]});
    }
    return product_state(std::move(q));
}

TEST(PartialOverlap, RandomProductStatistical) {
    Rng rng(17);
    const CTState phi = random_product(rng, 4);
    const CTState psi = random_product(rng, 4);
    const CTState xi = random_product(rng, 2);
    const CTState chi = random_product(rng, 2);
    const Amplitude exact = dense_partial_overlap(phi, xi, chi, psi);
    const int trials = 500;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        const Estimate e = partial_overlap(phi, xi, chi, psi, {0.1, 0.05, static_cast<std::uint64_t>(i), 1});
        ok += std::abs(e.value - exact) <= 0.1 ? 1 : 0;
    }
    EXPECT_GE(ok / static_cast<double>(trials), testing::success_floor(0.05, trials));
}

// <Phi1|Phi2> of the reduction equals the direct contraction, exactly.
TEST(PartialOverlapProperty, ReductionIdentityExact) {
    Rng rng(5);
    using testing::Recipe;
    const Recipe kinds[] = {Recipe::QftReversible, Recipe::Iqp, Recipe::Function, Recipe::Product, Recipe::Explicit};
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 3))));
        auto make = [&](int width) {
            return build_ct_state(testing::random_circuit(rng, kinds[rng.below(5)], width, false));
        };
        const CTState phi = make(n), psi = make(n), xi = make(k), chi = make(k);
        const OverlapReduction r = partial_overlap_reduction(phi, xi, chi, psi);
        EXPECT_LE(std::abs(dense_overlap(r.first, r.second) - dense_partial_overlap(phi, xi, chi, psi)), 1e-10);
    }
}

TEST(OverlapProperty, ConjugateSymmetryWithinTwoEpsilon) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const CTState a = random_product(rng, 3);
        const CTState b = build_ct_state(testing::random_circuit(rng, testing::Recipe::Iqp, 3, false));
        const Estimate ab = overlap(a, b, {0.1, 0.05, rng.bits(32), 1});
        const Estimate ba = overlap(b, a, {0.1, 0.05, rng.bits(32), 1});
        EXPECT_LE(std::abs(ab.value - std::conj(ba.value)), 0.2);
    }
}

TEST(OverlapProperty, StatisticalContract) {
    Rng rng(31);
    const CTState phi = build_ct_state(testing::random_circuit(rng, testing::Recipe::Iqp, 4, false));
    const CTState psi = random_product(rng, 4);
    const Amplitude exact = dense_overlap(phi, psi);
    const int trials = 500;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        ok += std::abs(overlap(phi, psi, {0.1, 0.05, static_cast<std::uint64_t>(i), 1}).value - exact) <= 0.1 ? 1 : 0;
    }
    EXPECT_GE(ok / static_cast<double>(trials), testing::success_floor(0.05, trials));
}

}  // namespace
}  // namespace sparsesim
