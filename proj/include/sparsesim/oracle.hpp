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

// Brute-force statevector reference. Everything here is built from elementary gates and
// never calls the closed-form amplitudes of ct_state.hpp, so it can serve as ground truth.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sparsesim/bitstring.hpp"
#include "sparsesim/circuit.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/marginals.hpp"

namespace sparsesim {

inline constexpr int kMaxDenseQubits = 16;

struct DenseState {
    int n = 0;
    std::vector<Amplitude> amplitudes;

    DenseState() = default;
    explicit DenseState(int qubits) : n(qubits), amplitudes(std::size_t{1} << qubits) {
        if (qubits < 0 || qubits > kMaxDenseQubits) {
            throw InputError("dense: qubit count " + std::to_string(qubits) + " exceeds the limit of 16");
        }
    }

    static DenseState basis(const BitString& x) {
        DenseState s(x.size());
        s.amplitudes[x.value()] = 1.0;
        return s;
    }

    std::size_t dim() const { return amplitudes.size(); }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amplitudes) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }
};

/// Queries every amplitude of a CT state.
inline DenseState dense_from_ct(const CTState& ct) {
    DenseState s(ct.num_qubits());
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        s.amplitudes[x] = ct.amplitude_at(x);
    }
    return s;
}

inline void apply_single(DenseState& s, int q, const Mat2& u) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        if (x & bit) {
            continue;
        }
        const Amplitude a0 = s.amplitudes[x];
        const Amplitude a1 = s.amplitudes[x | bit];
        s.amplitudes[x] = u[0][0] * a0 + u[0][1] * a1;
        s.amplitudes[x | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
}

/// diag(1, e^{i angle}) on `target` controlled by `control`.
inline void apply_controlled_phase(DenseState& s, int control, int target, double angle) {
    const std::uint64_t both = (std::uint64_t{1} << control) | (std::uint64_t{1} << target);
    const Amplitude w = std::polar(1.0, angle);
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        if ((x & both) == both) {
            s.amplitudes[x] *= w;
        }
    }
}

inline void apply_swap(DenseState& s, int a, int b) {
    if (a == b) {
        return;
    }
    const std::uint64_t ba = std::uint64_t{1} << a;
    const std::uint64_t bb = std::uint64_t{1} << b;
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        if ((x & ba) && !(x & bb)) {
            std::swap(s.amplitudes[x], s.amplitudes[(x & ~ba) | bb]);
        }
    }
}

/// Basis permutation x -> perm(x).
template <class Perm>
void apply_permutation(DenseState& s, Perm perm) {
    std::vector<Amplitude> out(s.dim());
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        out[perm(x)] += s.amplitudes[x];
    }
    s.amplitudes = std::move(out);
}

/// QFT mod 2^k on `targets` (targets[0] least significant) as Hadamards, controlled phases
/// and a final bit reversal; the inverse runs the adjoint circuit.
inline void apply_qft(DenseState& s, const std::vector<int>& targets, bool inverse = false) {
    const int k = static_cast<int>(targets.size());
    auto q_of = [&](int i) { return targets[static_cast<std::size_t>(i)]; };
    const Mat2 h = gate::hadamard();
    auto reverse = [&] {
        for (int i = 0; i < k / 2; ++i) {
            apply_swap(s, q_of(i), q_of(k - 1 - i));
        }
    };
    if (!inverse) {
        for (int q = k - 1; q >= 0; --q) {
            apply_single(s, q_of(q), h);
            for (int c = q - 1; c >= 0; --c) {
                apply_controlled_phase(s, q_of(c), q_of(q), std::numbers::pi / std::ldexp(1.0, q - c));
            }
        }
        reverse();
    } else {
        reverse();
        for (int q = 0; q < k; ++q) {
            for (int c = 0; c < q; ++c) {
                apply_controlled_phase(s, q_of(c), q_of(q), -std::numbers::pi / std::ldexp(1.0, q - c));
            }
            apply_single(s, q_of(q), h);
        }
    }
}

/// exp(i theta X_S) = cos(theta) I + i sin(theta) X_S.
inline void apply_x_rotation(DenseState& s, double theta, std::uint64_t mask) {
    std::vector<Amplitude> out(s.dim());
    const double c = std::cos(theta);
    const Amplitude is{0.0, std::sin(theta)};
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        out[x] += c * s.amplitudes[x];
        out[x ^ mask] += is * s.amplitudes[x];
    }
    s.amplitudes = std::move(out);
}

/// U1 |input> from the elementary gates of the recipe.
inline DenseState dense_prepare(const CircuitSpec& spec) {
    spec.validate();
    if (spec.n > kMaxDenseQubits) {
        throw InputError("dense: n = " + std::to_string(spec.n) + " exceeds the limit of 16");
    }
    DenseState s = DenseState::basis(spec.input);
    const Mat2 h = gate::hadamard();
    struct Prep {
        const CircuitSpec& spec;
        DenseState& s;
        const Mat2& h;
        void operator()(const QftReversibleRecipe& r) const {
            apply_qft(s, r.qft_targets, r.inverse);
            apply_permutation(s, [&](std::uint64_t x) { return r.gates.forward(x); });
        }
        void operator()(const IqpRecipe& r) const {
            for (const auto& g : r.gates) {
                apply_x_rotation(s, g.theta, mask_of(g.qubits));
            }
            for (int q = 0; q < spec.n; ++q) {
                apply_single(s, q, h);
            }
        }
        void operator()(const FunctionRecipe& r) const {
            for (int q = 0; q < spec.n; ++q) {
                apply_single(s, q, h);
            }
            const std::uint64_t mask = mask_of(r.mask);
            const int half = spec.n / 2;
            for (std::uint64_t x = 0; x < s.dim(); ++x) {
                int bit = 0;
                if (r.builtin == "parity") {
                    bit = std::popcount(x & mask) & 1;
                } else if (r.builtin == "inner-product") {
                    bit = std::popcount((x & low_mask(half)) & (x >> half)) & 1;
                }
                if (bit) {
                    s.amplitudes[x] = -s.amplitudes[x];
                }
            }
        }
        void operator()(const ProductRecipe& r) const {
            for (int q = 0; q < spec.n; ++q) {
                apply_single(s, q, r.unitaries[static_cast<std::size_t>(q)]);
            }
        }
        void operator()(const ExplicitRecipe& r) const {
            std::fill(s.amplitudes.begin(), s.amplitudes.end(), Amplitude{});
            for (const auto& [x, a] : r.amplitudes) {
                s.amplitudes[x.value()] = a;
            }
        }
    };
    std::visit(Prep{spec, s, h}, spec.u1);
    return s;
}

inline void apply_u2(DenseState& s, const U2Block& u2) {
    if (const auto* q = std::get_if<QftBlock>(&u2)) {
        apply_qft(s, q->targets, q->inverse);
        return;
    }
    const auto& p = std::get<ProductBlock>(u2);
    for (int q = 0; q < s.n; ++q) {
        apply_single(s, q, p.unitaries[static_cast<std::size_t>(q)]);
    }
}

/// The final state U2 U1 |input>.
inline DenseState dense_simulate(const CircuitSpec& spec) {
    DenseState s = dense_prepare(spec);
    apply_u2(s, spec.u2);
    return s;
}

/// Born probabilities of the measured register, indexed by its integer view in measure order.
inline std::vector<double> exact_distribution(const DenseState& s, const std::vector<int>& measured) {
    check_subset(measured, s.n, "exact_distribution");
    std::vector<double> p(std::size_t{1} << measured.size(), 0.0);
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        p[gather_bits(x, measured)] += std::norm(s.amplitudes[x]);
    }
    return p;
}

/// Sum of a distribution over strings with the given prefix (low bits of the integer view).
inline double prefix_mass(const std::vector<double>& dist, const BitString& prefix) {
    const std::uint64_t mask = low_mask(prefix.size());
    double s = 0.0;
    for (std::uint64_t x = 0; x < dist.size(); ++x) {
        if ((x & mask) == prefix.value()) {
            s += dist[x];
        }
    }
    return s;
}

inline double exact_marginal(const DenseState& s, const std::vector<int>& measured, const BitString& prefix) {
    if (prefix.size() > static_cast<int>(measured.size())) {
        throw InputError("exact_marginal: prefix longer than the measured register");
    }
    return prefix_mass(exact_distribution(s, measured), prefix);
}

/// Amplitudes reindexed by the measure-order integer view; measure must list every qubit.
inline std::vector<Amplitude> measured_amplitudes(const DenseState& s, const std::vector<int>& measure) {
    check_subset(measure, s.n, "measured_amplitudes");
    if (static_cast<int>(measure.size()) != s.n) {
        throw InputError("measured_amplitudes: every qubit must be measured");
    }
    std::vector<Amplitude> out(s.dim());
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        out[gather_bits(x, measure)] = s.amplitudes[x];
    }
    return out;
}

/// Marginal oracle returning exact prefix sums of a dense distribution.
inline MarginalOracle exact_marginal_oracle(int width, std::vector<double> dist) {
    if (dist.size() != (std::size_t{1} << width)) {
        throw InputError("exact_marginal_oracle: vector length is not 2^width");
    }
    return MarginalOracle(width, [dist = std::move(dist)](const BitString& y, const EstimationParams&) {
        const double p = prefix_mass(dist, y);
        return MarginalEstimate{std::clamp(p, 0.0, 1.0), Amplitude{p, 0.0}, 0, 0, false};
    });
}

/// Dense k-qubit operator as a row-major 2^k x 2^k matrix.
using DenseMatrix = std::vector<std::vector<Amplitude>>;

inline DenseMatrix qft_matrix(int k, bool inverse = false) {
    std::vector<int> targets(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        targets[static_cast<std::size_t>(i)] = i;
    }
    const std::size_t d = std::size_t{1} << k;
    DenseMatrix m(d, std::vector<Amplitude>(d));
    for (std::uint64_t col = 0; col < d; ++col) {
        DenseState s = DenseState::basis(BitString(k, col));
        apply_qft(s, targets, inverse);
        for (std::size_t row = 0; row < d; ++row) {
            m[row][col] = s.amplitudes[row];
        }
    }
    return m;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t d = a.size();
    DenseMatrix c(d, std::vector<Amplitude>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t l = 0; l < d; ++l) {
            const Amplitude ail = a[i][l];
            if (ail == Amplitude{}) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                c[i][j] += ail * b[l][j];
            }
        }
    }
    return c;
}

struct ConjugationDeviation {
    /// max |(F^dagger Z F - X)_ij|.
    double forward = 0.0;
    /// max |(F Z F^dagger - X^dagger)_ij|.
    double backward = 0.0;
};

/// Checks F^dagger Z F = X and F Z F^dagger = X^dagger for the QFT mod 2^k, with
/// Z|x> = e^{2 pi i x/2^k}|x> and X|x> = |x+1 mod 2^k>.
inline ConjugationDeviation verify_fourier_conjugation(int k) {
    if (k < 1 || k > 10) {
        throw InputError("verify_fourier_conjugation: k must lie in [1, 10]");
    }
    const std::size_t d = std::size_t{1} << k;
    const DenseMatrix f = qft_matrix(k, false);
    const DenseMatrix fd = qft_matrix(k, true);
    DenseMatrix z(d, std::vector<Amplitude>(d));
    for (std::size_t x = 0; x < d; ++x) {
        z[x][x] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(x) / static_cast<double>(d));
    }
    const DenseMatrix fwd = matmul(fd, matmul(z, f));
    const DenseMatrix bwd = matmul(f, matmul(z, fd));
    ConjugationDeviation dev;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double x_ij = (i == (j + 1) % d) ? 1.0 : 0.0;
            const double xd_ij = (j == (i + 1) % d) ? 1.0 : 0.0;
            dev.forward = std::max(dev.forward, std::abs(fwd[i][j] - x_ij));
            dev.backward = std::max(dev.backward, std::abs(bwd[i][j] - xd_ij));
        }
    }
    return dev;
}

/// <phi|psi> by enumeration.
inline Amplitude dense_overlap(const CTState& phi, const CTState& psi) {
    if (phi.num_qubits() != psi.num_qubits() || phi.num_qubits() > kMaxDenseQubits) {
        throw InputError("dense_overlap: incompatible or oversized states");
    }
    Amplitude s;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << phi.num_qubits()); ++x) {
        s += std::conj(phi.amplitude_at(x)) * psi.amplitude_at(x);
    }
    return s;
}

/// <phi|(|xi><chi| (x) I)|psi> contracted directly, projector on the low k qubits.
inline Amplitude dense_partial_overlap(const CTState& phi, const CTState& xi, const CTState& chi,
                                       const CTState& psi) {
    const int n = phi.num_qubits();
    const int k = xi.num_qubits();
    if (n > kMaxDenseQubits || k > n) {
        throw InputError("dense_partial_overlap: incompatible or oversized states");
    }
    const std::uint64_t da = std::uint64_t{1} << k;
    const std::uint64_t db = std::uint64_t{1} << (n - k);
    Amplitude total;
    for (std::uint64_t b = 0; b < db; ++b) {
        Amplitude left;
        Amplitude right;
        for (std::uint64_t a = 0; a < da; ++a) {
            left += std::conj(phi.amplitude_at(a | (b << k))) * xi.amplitude_at(a);
            right += std::conj(chi.amplitude_at(a)) * psi.amplitude_at(a | (b << k));
        }
        total += left * right;
    }
    return total;
}

}  // namespace sparsesim
