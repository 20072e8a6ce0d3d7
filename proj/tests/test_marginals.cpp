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

using testing::kPi;

const EstimationParams kDefault{0.1, 0.05, 0, 1};

CircuitSpec period_two() { return parse_circuit(testing::sample_path("period2.json")); }

TEST(FourierMarginal, ZeroStateFirstBitIsHalf) {
    const CTState ct = basis_state(BitString::zeros(4));
    const QftBlock b{{0, 1, 2, 3}, false};
    const MarginalEstimate e = fourier_marginal(ct, b, BitString::parse("0"), kDefault);
    EXPECT_LE(std::abs(e.probability - 0.5), 0.1);
    EXPECT_FALSE(e.imaginary_residue);
}

TEST(FourierMarginal, InverseImageIsPointMass) {
    const BitString y0(3, 5);
    const CTState ct = qft_image_state(3, y0, {0, 1, 2}, true);
    const MarginalEstimate e = fourier_marginal(ct, {{0, 1, 2}, false}, y0, kDefault);
    EXPECT_NEAR(e.probability, 1.0, 0.1);
    const MarginalEstimate other = fourier_marginal(ct, {{0, 1, 2}, false}, BitString(3, 4), kDefault);
    EXPECT_NEAR(other.probability, 0.0, 0.1);
}

TEST(FourierMarginal, PeriodTwoFullPrefix) {
    const CircuitSpec spec = period_two();
    const auto exact = exact_distribution(dense_simulate(spec), spec.measure);
    // Frozen from the dense QFT: mass 1/2 at integer views 0 and 8.
    for (std::uint64_t x = 0; x < 16; ++x) {
        EXPECT_NEAR(exact[x], (x == 0 || x == 8) ? 0.5 : 0.0, 1e-12);
    }
    const CTState ct = build_ct_state(spec);
    const QftBlock& b = std::get<QftBlock>(spec.u2);
    for (std::uint64_t x : {0u, 8u, 4u, 1u}) {
        const MarginalEstimate e = fourier_marginal(ct, b, BitString(4, x), {0.1, 0.05, x, 1});
        EXPECT_LE(std::abs(e.probability - exact[x]), 0.1) << x;
    }
}

TEST(FourierMarginal, NestedSchemeAgreesAtCoarseAccuracy) {
    const CircuitSpec spec = period_two();
    const CTState ct = build_ct_state(spec);
    const QftBlock& b = std::get<QftBlock>(spec.u2);
    const MarginalEstimate e = fourier_marginal(ct, b, BitString::parse("00"), {0.5, 0.3, 1, 1}, FourierScheme::Nested);
    EXPECT_LE(std::abs(e.probability - 0.5), 0.5);
    EXPECT_EQ(nested_outer_count(0.5, 0.3), chernoff_sample_count(0.25, 0.15));
}

TEST(FourierMarginal, RejectsBadPrefix) {
    const CTState ct = basis_state(BitString::zeros(2));
    EXPECT_THROW(fourier_marginal(ct, {{0, 1}, false}, BitString::parse("000"), kDefault), InputError);
    EXPECT_THROW(fourier_marginal(ct, {{0, 1}, false}, BitString(0, 0), kDefault), InputError);
}

TEST(ProductMarginal, IdentityOnBasisState) {
    const BitString x0 = BitString::parse("1101");
    const CTState ct = basis_state(x0);
    const ProductBlock b{std::vector<Mat2>(4, gate::identity())};
    const std::vector<int> measure{0, 1, 2, 3};
    EXPECT_NEAR(product_marginal(ct, b, measure, BitString::parse("11"), kDefault).probability, 1.0, 1e-12);
    EXPECT_NEAR(product_marginal(ct, b, measure, BitString::parse("10"), kDefault).probability, 0.0, 1e-12);
}

TEST(ProductMarginal, HadamardOnZeroIsUniform) {
    const CTState ct = basis_state(BitString::zeros(3));
    const ProductBlock b{std::vector<Mat2>(3, gate::hadamard())};
    for (int m = 1; m <= 3; ++m) {
        const MarginalEstimate e = product_marginal(ct, b, {0, 1, 2}, BitString(m, 1), {0.1, 0.05, 3, 1});
        EXPECT_LE(std::abs(e.probability - std::ldexp(1.0, -m)), 0.1);
    }
}

TEST(ProductMarginal, IqpStatistical) {
    CircuitSpec spec;
    spec.n = 3;
    spec.input = BitString::zeros(3);
    spec.u1 = IqpRecipe{{{kPi / 4, {0, 1}}, {kPi / 3, {2}}}};
    spec.u2 = ProductBlock{std::vector<Mat2>(3, gate::hadamard())};
    spec.measure = {0, 1, 2};
    const auto exact = exact_distribution(dense_simulate(spec), spec.measure);
    const MarginalOracle oracle = make_marginal_oracle(build_ct_state(spec), spec.u2, spec.measure);
    const BitString prefix = BitString::parse("00");
    const double truth = prefix_mass(exact, prefix);
    const int trials = 200;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        ok += std::abs(oracle(prefix, {0.1, 0.05, static_cast<std::uint64_t>(i), 1}).probability - truth) <= 0.1;
    }
    EXPECT_GE(ok / static_cast<double>(trials), testing::success_floor(0.05, trials));
}

TEST(MarginalOracle, QftMustMeasureTargets) {
    const CTState ct = basis_state(BitString::zeros(3));
    EXPECT_THROW(make_marginal_oracle(ct, QftBlock{{0, 1}, false}, {1, 0}), InputError);
}

TEST(MarginalOracle, ClampsToUnitInterval) {
    const auto e = finish_marginal({1.3, 0.5}, 1, 0, 0.1);
    EXPECT_EQ(e.probability, 1.0);
    EXPECT_TRUE(e.imaginary_residue);
    EXPECT_EQ(finish_marginal({-0.2, 0.0}, 1, 0, 0.1).probability, 0.0);
}

TEST(MarginalsProperty, ExactConsistencyAndMonotonicity) {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(9));
        const CircuitSpec spec = testing::random_circuit(rng, testing::Recipe::Iqp, n, rng.below(2) == 1);
        const auto dist = exact_distribution(dense_simulate(spec), spec.measure);
        const int k = static_cast<int>(spec.measure.size());
        for (int m = 1; m < k; ++m) {
            for (std::uint64_t y = 0; y < (std::uint64_t{1} << m); ++y) {
                const BitString p(m, y);
                const double parent = prefix_mass(dist, p);
                const double c0 = prefix_mass(dist, p.extended(0));
                const double c1 = prefix_mass(dist, p.extended(1));
                EXPECT_NEAR(parent, c0 + c1, 1e-12);
                EXPECT_GE(parent + 1e-15, c0);
                EXPECT_GE(parent + 1e-15, c1);
            }
        }
    }
}

// Both marginal routes against the dense oracle on random circuits of every family.
TEST(MarginalsProperty, AgreementWithDenseOracle) {
    using testing::Recipe;
    Rng rng(2024);
    const Recipe kinds[] = {Recipe::QftReversible, Recipe::Iqp, Recipe::Function, Recipe::Product, Recipe::Explicit};
    const int trials = 100;
    int ok = 0;
    for (int i = 0; i < trials; ++i) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const CircuitSpec spec = testing::random_circuit(rng, kinds[i % 5], n, i % 2 == 0);
        const auto dist = exact_distribution(dense_simulate(spec), spec.measure);
        const MarginalOracle oracle = make_marginal_oracle(build_ct_state(spec), spec.u2, spec.measure);
        const int m = 1 + static_cast<int>(rng.below(spec.measure.size()));
        const BitString y(m, rng.bits(m));
        const MarginalEstimate e = oracle(y, {0.1, 0.05, static_cast<std::uint64_t>(i), 1});
        ok += std::abs(e.probability - prefix_mass(dist, y)) <= 0.1 ? 1 : 0;
    }
    EXPECT_GE(ok / static_cast<double>(trials), testing::success_floor(0.05, trials));
}

TEST(MarginalsProperty, EstimatedConsistencyWithinThreeEpsilon) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const CircuitSpec spec = testing::random_circuit(rng, testing::Recipe::QftReversible, 4, true);
        const MarginalOracle oracle = make_marginal_oracle(build_ct_state(spec), spec.u2, spec.measure);
        if (spec.measure.size() < 2) {
            continue;
        }
        const BitString p(1, rng.bits(1));
        const EstimationParams q{0.1, 0.05, rng.bits(32), 1};
        const double parent = oracle(p, q).probability;
        const double c0 = oracle(p.extended(0), q.with(0.1, 0.05, q.seed + 1)).probability;
        const double c1 = oracle(p.extended(1), q.with(0.1, 0.05, q.seed + 2)).probability;
        EXPECT_LE(std::abs(parent - c0 - c1), 0.3);
    }
}

// The m = k marginal is the probability of the measured string, for QFT and inverse QFT.
TEST(MarginalsProperty, FullPrefixIsOutputProbability) {
    Rng rng(44);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        CircuitSpec spec = testing::random_circuit(rng, testing::Recipe::QftReversible, n, true);
        const auto dist = exact_distribution(dense_simulate(spec), spec.measure);
        const int k = static_cast<int>(spec.measure.size());
        std::uint64_t best = 0;
        for (std::uint64_t x = 0; x < dist.size(); ++x) {
            best = dist[x] > dist[best] ? x : best;
        }
        const MarginalOracle oracle = make_marginal_oracle(build_ct_state(spec), spec.u2, spec.measure);
        EXPECT_LE(std::abs(oracle(BitString(k, best), {0.05, 0.01, rng.bits(20), 1}).probability - dist[best]), 0.05);
    }
}

}  // namespace
}  // namespace sparsesim
