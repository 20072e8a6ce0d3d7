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
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sparsesim/basis_op.hpp"
#include "sparsesim/bitstring.hpp"
#include "sparsesim/random.hpp"
#include "sparsesim/reversible.hpp"

namespace sparsesim {

// Computationally tractable states: each family can draw x with probability |<x|psi>|^2 and
// evaluate <x|psi> exactly. States are immutable and shared by pointer, so copies are cheap
// and safe to use from several threads.

enum class StateFamily {
    BasisState,
    FunctionState,
    QftImageState,
    IqpState,
    ProductState,
    TensorPair,
    Permuted,
    OperatorImage,
    Explicit,
};

inline const char* family_name(StateFamily f) {
    switch (f) {
        case StateFamily::BasisState:
            return "basis";
        case StateFamily::FunctionState:
            return "function";
        case StateFamily::QftImageState:
            return "qft-image";
        case StateFamily::IqpState:
            return "iqp";
        case StateFamily::ProductState:
            return "product";
        case StateFamily::TensorPair:
            return "tensor";
        case StateFamily::Permuted:
            return "permuted";
        case StateFamily::OperatorImage:
            return "operator-image";
        case StateFamily::Explicit:
            return "explicit";
    }
    return "unknown";
}

/// Which component (0 or 1) and which of its qubits an output position of a tensor belongs to.
struct RegisterSlot {
    int component;
    int qubit;
    friend bool operator==(const RegisterSlot&, const RegisterSlot&) = default;
};

namespace detail {

struct StateModel {
    StateModel(int n, StateFamily f) : num_qubits(n), family(f) {}
    virtual ~StateModel() = default;
    virtual Amplitude amplitude(std::uint64_t x) const = 0;
    virtual std::uint64_t sample(Rng& rng) const = 0;
    virtual std::vector<RegisterSlot> registers() const {
        std::vector<RegisterSlot> out;
        for (int q = 0; q < num_qubits; ++q) {
            out.push_back({0, q});
        }
        return out;
    }

    int num_qubits;
    StateFamily family;
};

inline double uniform_scale(int n) { return std::sqrt(std::ldexp(1.0, -n)); }

}  // namespace detail

class CTState {
   public:
    explicit CTState(std::shared_ptr<const detail::StateModel> model) : model_(std::move(model)) {}

    int num_qubits() const { return model_->num_qubits; }
    StateFamily family() const { return model_->family; }

    /// <x|psi>.
    Amplitude amplitude(const BitString& x) const {
        if (x.size() != num_qubits()) {
            throw InputError("amplitude: string of length " + std::to_string(x.size()) + " queried on a " +
                             std::to_string(num_qubits()) + "-qubit state");
        }
        return model_->amplitude(x.value());
    }

    /// Draws x with probability |<x|psi>|^2.
    BitString sample(Rng& rng) const { return BitString(num_qubits(), model_->sample(rng)); }

    /// Unchecked integer-view variants for inner loops.
    Amplitude amplitude_at(std::uint64_t x) const { return model_->amplitude(x); }
    std::uint64_t sample_bits(Rng& rng) const { return model_->sample(rng); }

    std::vector<RegisterSlot> register_map() const { return model_->registers(); }

   private:
    std::shared_ptr<const detail::StateModel> model_;
};

namespace detail {

struct BasisModel final : StateModel {
    BasisModel(BitString x, Amplitude phase) : StateModel(x.size(), StateFamily::BasisState), x(x), phase(phase) {}
    Amplitude amplitude(std::uint64_t y) const override { return y == x.value() ? phase : Amplitude{}; }
    std::uint64_t sample(Rng&) const override { return x.value(); }
    BitString x;
    Amplitude phase;
};

struct FunctionModel final : StateModel {
    FunctionModel(int n, std::function<int(std::uint64_t)> f)
        : StateModel(n, StateFamily::FunctionState), f(std::move(f)), scale(uniform_scale(n)) {}
    Amplitude amplitude(std::uint64_t x) const override {
        const int v = f(x);
        if (v != 1 && v != -1) {
            throw InputError("function_state: f(x) must be +1 or -1");
        }
        return {v * scale, 0.0};
    }
    std::uint64_t sample(Rng& rng) const override { return rng.bits(num_qubits); }
    std::function<int(std::uint64_t)> f;
    double scale;
};

struct QftImageModel final : StateModel {
    QftImageModel(int n, BitString input, std::vector<int> subset, bool inverse, ReversibleCircuit t)
        : StateModel(n, StateFamily::QftImageState),
          input(input),
          subset(std::move(subset)),
          inverse(inverse),
          t(std::move(t)),
          k(static_cast<int>(this->subset.size())),
          layout(this->subset),
          input_on_subset(layout.gather(input.value())),
          off_mask(~layout.scatter(0, low_mask(k)) & low_mask(n)),
          scale(uniform_scale(k)) {}

    Amplitude amplitude(std::uint64_t x) const override {
        const std::uint64_t z = t.inverse(x);
        if ((z & off_mask) != (input.value() & off_mask)) {
            return {};
        }
        const std::uint64_t zs = layout.gather(z);
        return scale * root_of_unity(mulmod_pow2(zs, input_on_subset, k), k, inverse ? -1 : +1);
    }

    std::uint64_t sample(Rng& rng) const override {
        return t.forward(layout.scatter(input.value(), rng.bits(k)));
    }

    BitString input;
    std::vector<int> subset;
    bool inverse;
    ReversibleCircuit t;
    int k;
    BitLayout layout;
    std::uint64_t input_on_subset;
    std::uint64_t off_mask;
    double scale;
};

}  // namespace detail

/// A diagonal IQP gate exp(i theta Z_S) where Z_S is the product of Z over the qubits in `mask`.
struct DiagonalGate {
    double theta;
    std::uint64_t mask;
};

namespace detail {

struct IqpModel final : StateModel {
    IqpModel(BitString input, std::vector<DiagonalGate> gates)
        : StateModel(input.size(), StateFamily::IqpState),
          input(input),
          gates(std::move(gates)),
          scale(uniform_scale(input.size())) {}

    Amplitude amplitude(std::uint64_t x) const override {
        double angle = 0.0;
        for (const auto& g : gates) {
            angle += (std::popcount(x & g.mask) & 1) ? -g.theta : g.theta;
        }
        const double sign = (std::popcount(x & input.value()) & 1) ? -scale : scale;
        return std::polar(sign, angle);
    }
    std::uint64_t sample(Rng& rng) const override { return rng.bits(num_qubits); }

    BitString input;
    std::vector<DiagonalGate> gates;
    double scale;
};

struct ProductModel final : StateModel {
    // Qubits are grouped in chunks of up to 8; each chunk keeps its 2^len joint amplitudes and
    // their cumulative probabilities, so one query costs a lookup per chunk.
    static constexpr int kChunk = 8;

    explicit ProductModel(std::vector<std::array<Amplitude, 2>> q)
        : StateModel(static_cast<int>(q.size()), StateFamily::ProductState), qubits(std::move(q)) {
        for (int lo = 0; lo < num_qubits; lo += kChunk) {
            Chunk c;
            c.shift = lo;
            c.width = std::min(kChunk, num_qubits - lo);
            const std::uint64_t size = std::uint64_t{1} << c.width;
            double acc = 0.0;
            for (std::uint64_t v = 0; v < size; ++v) {
                Amplitude a{1.0, 0.0};
                for (int i = 0; i < c.width; ++i) {
                    a *= qubits[static_cast<std::size_t>(lo + i)][(v >> i) & 1];
                }
                c.amplitudes.push_back(a);
                acc += std::norm(a);
                c.cumulative.push_back(acc);
            }
            chunks.push_back(std::move(c));
        }
    }
    Amplitude amplitude(std::uint64_t x) const override {
        Amplitude out{1.0, 0.0};
        for (const Chunk& c : chunks) {
            out *= c.amplitudes[(x >> c.shift) & low_mask(c.width)];
        }
        return out;
    }
    std::uint64_t sample(Rng& rng) const override {
        std::uint64_t x = 0;
        for (const Chunk& c : chunks) {
            const double r = rng.uniform() * c.cumulative.back();
            const auto it = std::upper_bound(c.cumulative.begin(), c.cumulative.end(), r);
            const auto v = std::min<std::size_t>(static_cast<std::size_t>(it - c.cumulative.begin()), c.cumulative.size() - 1);
            x |= static_cast<std::uint64_t>(v) << c.shift;
        }
        return x;
    }

    struct Chunk {
        int shift = 0;
        int width = 0;
        std::vector<Amplitude> amplitudes;
        std::vector<double> cumulative;
    };
    std::vector<std::array<Amplitude, 2>> qubits;
    std::vector<Chunk> chunks;
};

struct TensorModel final : StateModel {
    TensorModel(CTState a, CTState b)
        : StateModel(a.num_qubits() + b.num_qubits(), StateFamily::TensorPair), a(std::move(a)), b(std::move(b)) {}
    Amplitude amplitude(std::uint64_t x) const override {
        const int na = a.num_qubits();
        return a.amplitude_at(x & low_mask(na)) * b.amplitude_at(x >> na);
    }
    std::uint64_t sample(Rng& rng) const override {
        const std::uint64_t lo = a.sample_bits(rng);
        return lo | (b.sample_bits(rng) << a.num_qubits());
    }
    std::vector<RegisterSlot> registers() const override {
        std::vector<RegisterSlot> out;
        for (int q = 0; q < a.num_qubits(); ++q) {
            out.push_back({0, q});
        }
        for (int q = 0; q < b.num_qubits(); ++q) {
            out.push_back({1, q});
        }
        return out;
    }
    CTState a;
    CTState b;
};

struct PermutedModel final : StateModel {
    PermutedModel(CTState inner, std::vector<int> positions)
        : StateModel(inner.num_qubits(), StateFamily::Permuted), inner(std::move(inner)), layout(std::move(positions)) {}
    Amplitude amplitude(std::uint64_t x) const override { return inner.amplitude_at(layout.gather(x)); }
    std::uint64_t sample(Rng& rng) const override { return layout.scatter(0, inner.sample_bits(rng)); }
    CTState inner;
    BitLayout layout;
};

struct OperatorImageModel final : StateModel {
    OperatorImageModel(BasisPreservingOp op, CTState inner)
        : StateModel(inner.num_qubits(), StateFamily::OperatorImage), op(std::move(op)), inner(std::move(inner)) {}
    // <x|A|psi> = g(f'(x)) psi(f'(x)) = conj(g'(x)) psi(f'(x)).
    Amplitude amplitude(std::uint64_t x) const override {
        const Mapped back = op.apply_inverse(x);
        return std::conj(back.phase) * inner.amplitude_at(back.bits);
    }
    std::uint64_t sample(Rng& rng) const override { return op.apply(inner.sample_bits(rng)).bits; }
    BasisPreservingOp op;
    CTState inner;
};

struct ExplicitModel final : StateModel {
    ExplicitModel(int n, std::vector<std::pair<std::uint64_t, Amplitude>> entries)
        : StateModel(n, StateFamily::Explicit), entries(std::move(entries)) {
        std::sort(this->entries.begin(), this->entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double acc = 0.0;
        for (const auto& e : this->entries) {
            acc += std::norm(e.second);
            cumulative.push_back(acc);
        }
    }
    Amplitude amplitude(std::uint64_t x) const override {
        auto it = std::lower_bound(entries.begin(), entries.end(), x,
                                   [](const auto& e, std::uint64_t v) { return e.first < v; });
        return (it != entries.end() && it->first == x) ? it->second : Amplitude{};
    }
    std::uint64_t sample(Rng& rng) const override {
        const double r = rng.uniform() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), entries.size() - 1);
        return entries[i].first;
    }
    std::vector<std::pair<std::uint64_t, Amplitude>> entries;
    std::vector<double> cumulative;
};

inline void check_width(int n, const char* what) {
    if (n < 0 || n > kMaxQubits) {
        throw InputError(std::string(what) + ": qubit count " + std::to_string(n) + " outside [0, 63]");
    }
}

}  // namespace detail

/// phase * |x>.
inline CTState basis_state(const BitString& x, Amplitude phase = {1.0, 0.0}) {
    if (std::abs(std::abs(phase) - 1.0) > 1e-12) {
        throw InputError("basis_state: phase must have unit modulus");
    }
    return CTState(std::make_shared<detail::BasisModel>(x, phase));
}

/// 2^(-n/2) sum_x f(x) |x> for f: B_n -> {+1, -1}.
inline CTState function_state(int n, std::function<int(std::uint64_t)> f) {
    detail::check_width(n, "function_state");
    if (!f) {
        throw InputError("function_state: empty function");
    }
    return CTState(std::make_shared<detail::FunctionModel>(n, std::move(f)));
}

namespace boolean_function {

inline std::function<int(std::uint64_t)> constant() {
    return [](std::uint64_t) { return 1; };
}

/// (-1)^(x . mask).
inline std::function<int(std::uint64_t)> parity(std::uint64_t mask) {
    return [mask](std::uint64_t x) { return (std::popcount(x & mask) & 1) ? -1 : 1; };
}

/// (-1)^(x_low . x_high) on an even number of bits: the inner-product bent function.
inline std::function<int(std::uint64_t)> inner_product(int n) {
    const int half = n / 2;
    return [half](std::uint64_t x) {
        const std::uint64_t lo = x & low_mask(half);
        const std::uint64_t hi = (x >> half) & low_mask(half);
        return (std::popcount(lo & hi) & 1) ? -1 : 1;
    };
}

}  // namespace boolean_function

/// T F_S |input>: the QFT mod 2^k (or its inverse) on the ordered subset S, followed by the
/// reversible circuit T. subset[0] is the least significant qubit inside the QFT.
inline CTState qft_image_state(int n, const BitString& input, std::vector<int> subset, bool inverse = false,
                               ReversibleCircuit t = {}) {
    detail::check_width(n, "qft_image_state");
    if (input.size() != n) {
        throw InputError("qft_image_state: input length differs from n");
    }
    check_subset(subset, n, "qft_image_state subset");
    t.validate(n);
    return CTState(std::make_shared<detail::QftImageModel>(n, input, std::move(subset), inverse, std::move(t)));
}

/// C' H^(x)n |input> with C' a product of diagonal gates exp(i theta Z_S).
inline CTState iqp_state(const BitString& input, std::vector<DiagonalGate> gates) {
    for (const auto& g : gates) {
        if ((g.mask & ~low_mask(input.size())) != 0) {
            throw InputError("iqp_state: gate acts outside the register");
        }
        if (!std::isfinite(g.theta)) {
            throw InputError("iqp_state: non-finite angle");
        }
    }
    return CTState(std::make_shared<detail::IqpModel>(input, std::move(gates)));
}

/// Tensor product of single-qubit states; qubit i has amplitudes (a_i0, a_i1).
inline CTState product_state(std::vector<std::array<Amplitude, 2>> qubits) {
    detail::check_width(static_cast<int>(qubits.size()), "product_state");
    for (auto& a : qubits) {
        const double norm = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
        if (!(std::abs(norm - 1.0) <= 1e-9)) {
            throw InputError("product_state: single-qubit factor is not normalized");
        }
        a[0] /= norm;
        a[1] /= norm;
    }
    return CTState(std::make_shared<detail::ProductModel>(std::move(qubits)));
}

/// a (x) b with a on positions 0 .. n_a-1 and b on the following n_b positions.
inline CTState tensor(CTState a, CTState b) {
    detail::check_width(a.num_qubits() + b.num_qubits(), "tensor");
    return CTState(std::make_shared<detail::TensorModel>(std::move(a), std::move(b)));
}

/// Relabels qubits: qubit j of `inner` is placed at output position positions[j].
inline CTState permuted(CTState inner, std::vector<int> positions) {
    if (static_cast<int>(positions.size()) != inner.num_qubits()) {
        throw InputError("permuted: permutation length differs from the qubit count");
    }
    check_subset(positions, inner.num_qubits(), "permuted");
    return CTState(std::make_shared<detail::PermutedModel>(std::move(inner), std::move(positions)));
}

/// A|psi> for a basis-preserving A; CT whenever psi is.
inline CTState operator_image(BasisPreservingOp op, CTState inner) {
    if (op.num_qubits() != inner.num_qubits()) {
        throw InputError("operator_image: operator width differs from the state");
    }
    return CTState(std::make_shared<detail::OperatorImageModel>(std::move(op), std::move(inner)));
}

/// An explicitly listed sparse state; the amplitudes must have unit 2-norm.
inline CTState explicit_state(int n, const std::vector<std::pair<BitString, Amplitude>>& entries) {
    detail::check_width(n, "explicit_state");
    if (entries.empty()) {
        throw InputError("explicit_state: empty support");
    }
    std::vector<std::pair<std::uint64_t, Amplitude>> raw;
    double norm = 0.0;
    for (const auto& [x, a] : entries) {
        if (x.size() != n) {
            throw InputError("explicit_state: string length differs from n");
        }
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InputError("explicit_state: non-finite amplitude");
        }
        raw.emplace_back(x.value(), a);
        norm += std::norm(a);
    }
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].first == raw[i - 1].first) {
            throw InputError("explicit_state: duplicate basis string");
        }
    }
    if (std::abs(norm - 1.0) > 1e-10) {
        throw InputError("explicit_state: amplitudes are not normalized");
    }
    return CTState(std::make_shared<detail::ExplicitModel>(n, std::move(raw)));
}

}  // namespace sparsesim
