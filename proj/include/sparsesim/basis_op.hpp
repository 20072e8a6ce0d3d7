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

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sparsesim/bitstring.hpp"

namespace sparsesim {

/// (a * b) mod 2^k, exact for all 64-bit operands.
inline std::uint64_t mulmod_pow2(std::uint64_t a, std::uint64_t b, int k) {
    // Unsigned 64-bit products wrap mod 2^64, so the low k <= 64 bits are exact.
    return (a * b) & low_mask(k);
}

namespace detail {

inline constexpr int kRootTableBits = 16;

/// exp(2 pi i r / 2^16) as coarse[r >> 8] * fine[r & 255]; both tables fit in L1.
struct RootTables {
    std::array<Amplitude, 256> coarse;
    std::array<Amplitude, 256> fine;
};

inline const RootTables& root_tables() {
    static const RootTables tables = [] {
        RootTables t;
        for (std::size_t i = 0; i < 256; ++i) {
            const double d = static_cast<double>(i);
            t.coarse[i] = std::polar(1.0, 2.0 * std::numbers::pi * std::ldexp(d, -8));
            t.fine[i] = std::polar(1.0, 2.0 * std::numbers::pi * std::ldexp(d, -16));
        }
        return t;
    }();
    return tables;
}

}  // namespace detail

/// exp(sign * 2 pi i * numerator / 2^k); numerator is reduced mod 2^k first.
inline Amplitude root_of_unity(std::uint64_t numerator, int k, int sign = +1) {
    if (k == 0) {
        return {1.0, 0.0};
    }
    const std::uint64_t r = numerator & low_mask(k);
    if (r == 0) {
        return {1.0, 0.0};
    }
    if (k <= detail::kRootTableBits) {
        const std::uint64_t i = r << (detail::kRootTableBits - k);
        const detail::RootTables& t = detail::root_tables();
        const Amplitude w = t.coarse[i >> 8] * t.fine[i & 255];
        return sign >= 0 ? w : std::conj(w);
    }
    const double angle = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(r), -k);
    return std::polar(1.0, sign >= 0 ? angle : -angle);
}

/// Image of a basis string under a basis-preserving unitary: U|x> = phase |bits>.
struct Mapped {
    Amplitude phase;
    std::uint64_t bits;
};

/// A unitary U with U|x> = g(x)|f(x)> and U^dagger|x> = g'(x)|f'(x)>, |g| = |g'| = 1.
class BasisPreservingOp {
   public:
    using Map = std::function<Mapped(std::uint64_t)>;

    BasisPreservingOp(int num_qubits, Map forward, Map inverse)
        : n_(num_qubits), forward_(std::move(forward)), inverse_(std::move(inverse)) {}

    static BasisPreservingOp identity(int num_qubits) {
        auto id = [](std::uint64_t x) { return Mapped{{1.0, 0.0}, x}; };
        return BasisPreservingOp(num_qubits, id, id);
    }

    int num_qubits() const { return n_; }
    Mapped apply(std::uint64_t x) const { return forward_(x); }
    Mapped apply_inverse(std::uint64_t x) const { return inverse_(x); }

    /// The same operator acting on `positions` (positions[i] plays local qubit i) of an
    /// n-qubit register, identity elsewhere.
    BasisPreservingOp embedded(std::vector<int> positions, int n) const {
        if (static_cast<int>(positions.size()) != n_) {
            throw InputError("BasisPreservingOp::embedded: subset size differs from operator width");
        }
        check_subset(positions, n, "BasisPreservingOp::embedded");
        const BitLayout layout(std::move(positions));
        auto lift = [layout](const Map& local) {
            return [layout, local](std::uint64_t x) {
                const Mapped m = local(layout.gather(x));
                return Mapped{m.phase, layout.scatter(x, m.bits)};
            };
        };
        return BasisPreservingOp(n, lift(forward_), lift(inverse_));
    }

   private:
    int n_;
    Map forward_;
    Map inverse_;
};

/// The Weyl operator N = alpha^y X^(direction * 2^(k-m)) on a k-qubit register, alpha = exp(-2 pi i / 2^m).
///
/// N^u maps the basis state with integer view x to alpha^(y u) |x + direction * u 2^(k-m) mod 2^k>.
/// direction = +1 arises from conjugating Z by the QFT, direction = -1 from the inverse QFT.
class WeylShift {
   public:
    WeylShift(std::uint64_t y_hat, int m, int k, int direction = +1) : y_(y_hat), m_(m), k_(k), dir_(direction) {
        if (k < 1 || k > kMaxQubits) {
            throw InputError("weyl_shift_op: k must lie in [1, 63]");
        }
        if (m < 1 || m > k) {
            throw InputError("weyl_shift_op: m must satisfy 1 <= m <= k (m = " + std::to_string(m) +
                             ", k = " + std::to_string(k) + ")");
        }
        if (y_hat > low_mask(m)) {
            throw InputError("weyl_shift_op: y must be below 2^m");
        }
        if (direction != 1 && direction != -1) {
            throw InputError("weyl_shift_op: direction must be +1 or -1");
        }
    }

    std::uint64_t y_hat() const { return y_; }
    int m() const { return m_; }
    int k() const { return k_; }
    int direction() const { return dir_; }

    /// Phase alpha^(y u).
    Amplitude phase(std::uint64_t u) const { return root_of_unity(mulmod_pow2(y_, u, m_), m_, -1); }

    /// Shifted integer view for power u.
    std::uint64_t shift(std::uint64_t x, std::uint64_t u) const {
        const std::uint64_t step = mulmod_pow2(u, std::uint64_t{1} << (k_ - m_), k_);
        return (dir_ > 0 ? x + step : x - step) & low_mask(k_);
    }

    Mapped power(std::uint64_t u, std::uint64_t x) const { return {phase(u), shift(x, u)}; }

    /// N^u as a k-qubit basis-preserving operator.
    BasisPreservingOp power_op(std::uint64_t u) const {
        const WeylShift self = *this;
        const WeylShift back(y_, m_, k_, -dir_);
        const Amplitude g = phase(u);
        const Amplitude g_inv = std::conj(g);
        return BasisPreservingOp(
            k_, [self, u, g](std::uint64_t x) { return Mapped{g, self.shift(x, u)}; },
            [back, u, g_inv](std::uint64_t x) { return Mapped{g_inv, back.shift(x, u)}; });
    }

    /// The controlled operator sum_u N^u (x) |u><u| on data positions `targets` (first listed
    /// target is the least significant) of an n-qubit data register plus an m-qubit control
    /// register stored at positions n .. n+m-1.
    BasisPreservingOp controlled(std::vector<int> targets, int n) const {
        if (static_cast<int>(targets.size()) != k_) {
            throw InputError("WeylShift::controlled: expected " + std::to_string(k_) + " targets");
        }
        check_subset(targets, n, "WeylShift::controlled");
        if (n + m_ > kMaxQubits) {
            throw InputError("WeylShift::controlled: register too wide");
        }
        const WeylShift fwd = *this;
        const WeylShift back(y_, m_, k_, -dir_);
        const int m = m_;
        const BitLayout layout(std::move(targets));
        auto make = [layout, n, m](WeylShift w, int phase_sign) {
            return [w, layout, n, m, phase_sign](std::uint64_t x) {
                const std::uint64_t u = (x >> n) & low_mask(m);
                const Amplitude g = w.phase(u);
                return Mapped{phase_sign > 0 ? g : std::conj(g), layout.scatter(x, w.shift(layout.gather(x), u))};
            };
        };
        return BasisPreservingOp(n + m_, make(fwd, +1), make(back, -1));
    }

   private:
    std::uint64_t y_;
    int m_;
    int k_;
    int dir_;
};

/// weyl_shift_op(y, m, k): the operator family N^u with N = alpha^y X^(2^(k-m)).
inline WeylShift weyl_shift_op(std::uint64_t y_hat, int m, int k) { return WeylShift(y_hat, m, k, +1); }

}  // namespace sparsesim
