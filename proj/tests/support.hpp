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

// Random instance generators shared by the unit tests and the acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "sparsesim/sparsesim.hpp"

namespace sparsesim::testing {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<int> random_subset(Rng& rng, int n, int k) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        std::swap(all[static_cast<std::size_t>(i)], all[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    all.resize(static_cast<std::size_t>(k));
    return all;
}

inline std::vector<int> identity_order(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline Mat2 random_unitary(Rng& rng) {
    const Mat2 u = gate::u3(uniform(rng, 0, kPi), uniform(rng, 0, 2 * kPi), uniform(rng, 0, 2 * kPi));
    const Amplitude g = std::polar(1.0, uniform(rng, 0, 2 * kPi));
    return {{{g * u[0][0], g * u[0][1]}, {g * u[1][0], g * u[1][1]}}};
}

inline std::vector<Mat2> random_unitaries(Rng& rng, int n) {
    std::vector<Mat2> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(random_unitary(rng));
    }
    return out;
}

inline ReversibleCircuit random_reversible(Rng& rng, int n, int gates) {
    ReversibleCircuit c;
    for (int g = 0; g < gates; ++g) {
        const int kind = n >= 3 ? static_cast<int>(rng.below(3)) : n == 2 ? static_cast<int>(rng.below(2)) : 0;
        const auto q = random_subset(rng, n, kind + 1);
        if (kind == 0) {
            c.push_back(ReversibleGate::not_gate(q[0]));
        } else if (kind == 1) {
            c.push_back(ReversibleGate::cnot(q[0], q[1]));
        } else {
            c.push_back(ReversibleGate::toffoli(q[0], q[1], q[2]));
        }
    }
    return c;
}

inline BitString random_bits(Rng& rng, int n) { return BitString(n, rng.bits(n)); }

inline std::vector<std::pair<BitString, Amplitude>> random_sparse_amplitudes(Rng& rng, int n, int support) {
    std::vector<std::uint64_t> xs;
    while (static_cast<int>(xs.size()) < support) {
        const std::uint64_t x = rng.bits(n);
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) {
            xs.push_back(x);
        }
    }
    std::vector<std::pair<BitString, Amplitude>> out;
    double norm = 0.0;
    for (auto x : xs) {
        const Amplitude a = std::polar(uniform(rng, 0.2, 1.0), uniform(rng, 0, 2 * kPi));
        out.emplace_back(BitString(n, x), a);
        norm += std::norm(a);
    }
    for (auto& e : out) {
        e.second /= std::sqrt(norm);
    }
    return out;
}

enum class Recipe { QftReversible, Iqp, Function, Product, Explicit };

inline U1Recipe random_u1(Rng& rng, Recipe kind, int n) {
    switch (kind) {
        case Recipe::QftReversible: {
            QftReversibleRecipe r;
            r.qft_targets = random_subset(rng, n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
            r.inverse = rng.below(2) == 1;
            r.gates = random_reversible(rng, n, static_cast<int>(rng.below(6)));
            return r;
        }
        case Recipe::Iqp: {
            IqpRecipe r;
            const int gates = static_cast<int>(rng.below(5));
            for (int g = 0; g < gates; ++g) {
                r.gates.push_back(
                    {uniform(rng, -kPi, kPi), random_subset(rng, n, 1 + static_cast<int>(rng.below(std::min(n, 3))))});
            }
            return r;
        }
        case Recipe::Function: {
            FunctionRecipe r;
            const int which = static_cast<int>(rng.below(n % 2 == 0 ? 3 : 2));
            r.builtin = which == 0 ? "constant" : which == 1 ? "parity" : "inner-product";
            if (which == 1) {
                r.mask = random_subset(rng, n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)));
            }
            return r;
        }
        case Recipe::Product:
            return ProductRecipe{random_unitaries(rng, n)};
        case Recipe::Explicit:
            return ExplicitRecipe{random_sparse_amplitudes(
                rng, n, 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(6, std::uint64_t{1} << n))))};
    }
    return ExplicitRecipe{};
}

/// A random two-block circuit; the QFT second block measures its own targets.
inline CircuitSpec random_circuit(Rng& rng, Recipe kind, int n, bool qft_second) {
    CircuitSpec s;
    s.n = n;
    s.input = random_bits(rng, n);
    s.u1 = random_u1(rng, kind, n);
    if (qft_second) {
        QftBlock b{random_subset(rng, n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))),
                   rng.below(2) == 1};
        s.measure = b.targets;
        s.u2 = b;
    } else {
        s.u2 = ProductBlock{random_unitaries(rng, n)};
        s.measure = random_subset(rng, n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    }
    return s;
}

/// Random normalized distribution on `support` distinct k-bit strings.
inline SparseDistribution random_sparse_distribution(Rng& rng, int k, int support, double min_weight = 0.05) {
    std::vector<std::uint64_t> xs;
    while (static_cast<int>(xs.size()) < support) {
        const std::uint64_t x = rng.bits(k);
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) {
            xs.push_back(x);
        }
    }
    std::vector<double> w;
    double total = 0.0;
    for (int i = 0; i < support; ++i) {
        w.push_back(uniform(rng, min_weight, 1.0));
        total += w.back();
    }
    std::vector<std::pair<BitString, double>> e;
    for (int i = 0; i < support; ++i) {
        e.emplace_back(BitString(k, xs[static_cast<std::size_t>(i)]), w[static_cast<std::size_t>(i)] / total);
    }
    return normalize(SparseDistribution(k, std::move(e)));
}

/// Lower confidence limit 1 - delta - 3 sqrt(delta (1 - delta) / trials) on a success rate.
inline double success_floor(double delta, int trials) {
    return 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
}

/// Total variation distance between empirical counts and an exact distribution.
inline double empirical_tv(const std::vector<std::uint64_t>& counts, const std::vector<double>& exact) {
    double total = 0.0;
    for (auto c : counts) {
        total += static_cast<double>(c);
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        tv += std::abs(static_cast<double>(counts[i]) / total - exact[i]);
    }
    return tv / 2.0;
}

inline std::vector<std::uint64_t> sample_counts(const CTState& s, std::uint64_t draws, std::uint64_t seed) {
    std::vector<std::uint64_t> counts(std::size_t{1} << s.num_qubits(), 0);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < draws; ++i) {
        ++counts[s.sample_bits(rng)];
    }
    return counts;
}

inline std::vector<double> born(const DenseState& s) {
    std::vector<double> p;
    for (const auto& a : s.amplitudes) {
        p.push_back(std::norm(a));
    }
    return p;
}

inline double max_deviation(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Shipped sample circuits live next to the sources.
inline std::string sample_path(const std::string& name) { return std::string(SPARSESIM_SAMPLES_DIR) + "/" + name; }

}  // namespace sparsesim::testing
