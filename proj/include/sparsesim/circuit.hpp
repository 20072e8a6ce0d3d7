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
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sparsesim/bitstring.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/reversible.hpp"

namespace sparsesim {

/// Row-major 2x2 complex matrix: m[row][col].
using Mat2 = std::array<std::array<Amplitude, 2>, 2>;

namespace gate {

inline Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
inline Mat2 hadamard() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {{{s, s}, {s, -s}}};
}
inline Mat2 pauli_x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
inline Mat2 pauli_y() { return {{{0.0, Amplitude{0.0, -1.0}}, {Amplitude{0.0, 1.0}, 0.0}}}; }
inline Mat2 pauli_z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }
inline Mat2 phase_s() { return {{{1.0, 0.0}, {0.0, Amplitude{0.0, 1.0}}}}; }
inline Mat2 phase_t() { return {{{1.0, 0.0}, {0.0, std::polar(1.0, std::numbers::pi / 4.0)}}}; }

/// The standard rotation U3(theta, phi, lambda).
inline Mat2 u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {{{c, -std::polar(s, lambda)}, {std::polar(s, phi), std::polar(c, phi + lambda)}}};
}

inline Mat2 adjoint(const Mat2& m) {
    return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

inline bool is_unitary(const Mat2& m, double tol = 1e-9) {
    const Mat2 a = adjoint(m);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Amplitude s = a[i][0] * m[0][j] + a[i][1] * m[1][j];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace gate

// ---- First block (U1): recipes producing a CT state from the input string. ----

/// QFT (or inverse) on `qft_targets` applied to |input>, followed by reversible gates.
struct QftReversibleRecipe {
    std::vector<int> qft_targets;
    bool inverse = false;
    ReversibleCircuit gates;
    friend bool operator==(const QftReversibleRecipe&, const QftReversibleRecipe&) = default;
};

/// IQP gate exp(i theta X_S), X_S the product of X over `qubits`.
struct IqpGate {
    double theta = 0.0;
    std::vector<int> qubits;
    friend bool operator==(const IqpGate&, const IqpGate&) = default;
};

/// The CT part C' H^(x)n |input> of an IQP circuit H^(x)n C' H^(x)n, given by its X-form gates.
struct IqpRecipe {
    std::vector<IqpGate> gates;
    friend bool operator==(const IqpRecipe&, const IqpRecipe&) = default;
};

/// diag(f) H^(x)n |input> for a builtin f: "constant", "parity" (over `mask`), "inner-product".
struct FunctionRecipe {
    std::string builtin = "constant";
    std::vector<int> mask;
    friend bool operator==(const FunctionRecipe&, const FunctionRecipe&) = default;
};

/// (u_0 (x) ... (x) u_{n-1}) |input>.
struct ProductRecipe {
    std::vector<Mat2> unitaries;
    friend bool operator==(const ProductRecipe&, const ProductRecipe&) = default;
};

/// An explicitly listed normalized sparse state; the input string is unused.
struct ExplicitRecipe {
    std::vector<std::pair<BitString, Amplitude>> amplitudes;
    friend bool operator==(const ExplicitRecipe&, const ExplicitRecipe&) = default;
};

using U1Recipe = std::variant<QftReversibleRecipe, IqpRecipe, FunctionRecipe, ProductRecipe, ExplicitRecipe>;

// ---- Second block (U2). ----

/// QFT mod 2^k (or inverse) on the ordered `targets`; targets[0] is least significant.
struct QftBlock {
    std::vector<int> targets;
    bool inverse = false;
    friend bool operator==(const QftBlock&, const QftBlock&) = default;
};

/// u_0 (x) ... (x) u_{n-1}.
struct ProductBlock {
    std::vector<Mat2> unitaries;
    friend bool operator==(const ProductBlock&, const ProductBlock&) = default;
};

using U2Block = std::variant<QftBlock, ProductBlock>;

/// The inverse of a second block, as a block of the same kind.
inline U2Block adjoint(const U2Block& u2) {
    if (const auto* q = std::get_if<QftBlock>(&u2)) {
        return QftBlock{q->targets, !q->inverse};
    }
    ProductBlock out = std::get<ProductBlock>(u2);
    for (auto& u : out.unitaries) {
        u = gate::adjoint(u);
    }
    return out;
}

/// Circuit C = U2 U1 on n qubits followed by measurement of the ordered register `measure`.
struct CircuitSpec {
    int n = 0;
    BitString input;
    U1Recipe u1;
    U2Block u2;
    std::vector<int> measure;

    friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;

    /// Throws InputError with a field path for the first violated constraint.
    void validate() const {
        if (n < 1 || n > kMaxQubits) {
            throw InputError("n: must lie in [1, 63], got " + std::to_string(n));
        }
        if (input.size() != n) {
            throw InputError("input: length " + std::to_string(input.size()) + " differs from n = " +
                             std::to_string(n));
        }
        std::visit([&](const auto& r) { validate_u1(r); }, u1);
        if (measure.empty()) {
            throw InputError("measure: at least one qubit must be measured");
        }
        check_subset(measure, n, "measure");
        if (const auto* q = std::get_if<QftBlock>(&u2)) {
            if (q->targets.empty()) {
                throw InputError("u2.targets: QFT needs at least one target");
            }
            check_subset(q->targets, n, "u2.targets");
            if (q->targets != measure) {
                throw InputError("measure: must list exactly the QFT targets in the same order");
            }
        } else {
            const auto& p = std::get<ProductBlock>(u2);
            check_unitaries(p.unitaries, "u2.unitaries");
        }
    }

   private:
    void check_unitaries(const std::vector<Mat2>& us, const std::string& field) const {
        if (static_cast<int>(us.size()) != n) {
            throw InputError(field + ": expected " + std::to_string(n) + " single-qubit unitaries, got " +
                             std::to_string(us.size()));
        }
        for (std::size_t i = 0; i < us.size(); ++i) {
            if (!gate::is_unitary(us[i])) {
                throw InputError(field + "[" + std::to_string(i) + "]: matrix is not unitary");
            }
        }
    }

    void validate_u1(const QftReversibleRecipe& r) const {
        check_subset(r.qft_targets, n, "u1.qft_targets");
        try {
            r.gates.validate(n);
        } catch (const InputError& e) {
            throw InputError(std::string("u1.gates: ") + e.what());
        }
    }
    void validate_u1(const IqpRecipe& r) const {
        for (std::size_t i = 0; i < r.gates.size(); ++i) {
            const std::string field = "u1.gates[" + std::to_string(i) + "]";
            if (r.gates[i].qubits.empty()) {
                throw InputError(field + ": gate acts on no qubits");
            }
            if (!std::isfinite(r.gates[i].theta)) {
                throw InputError(field + ": theta is not finite");
            }
            check_subset(r.gates[i].qubits, n, field);
        }
    }
    void validate_u1(const FunctionRecipe& r) const {
        if (r.builtin == "parity") {
            check_subset(r.mask, n, "u1.mask");
        } else if (r.builtin == "inner-product") {
            if (n % 2 != 0) {
                throw InputError("u1.builtin: inner-product needs an even qubit count");
            }
        } else if (r.builtin != "constant") {
            throw InputError("u1.builtin: unknown function '" + r.builtin + "'");
        }
    }
    void validate_u1(const ProductRecipe& r) const { check_unitaries(r.unitaries, "u1.unitaries"); }
    void validate_u1(const ExplicitRecipe& r) const {
        for (const auto& [x, a] : r.amplitudes) {
            if (x.size() != n) {
                throw InputError("u1.amplitudes: string '" + x.str() + "' has the wrong length");
            }
        }
    }
};

inline std::uint64_t mask_of(const std::vector<int>& qubits) {
    std::uint64_t m = 0;
    for (int q : qubits) {
        m |= std::uint64_t{1} << q;
    }
    return m;
}

/// The CT state U1|input>.
///
/// For IQP recipes the X-form gates exp(i theta X_S) are conjugated by Hadamards into the
/// diagonal gates exp(i theta Z_S) on the same qubits.
inline CTState build_ct_state(const CircuitSpec& spec) {
    spec.validate();
    struct Builder {
        const CircuitSpec& spec;
        CTState operator()(const QftReversibleRecipe& r) const {
            return qft_image_state(spec.n, spec.input, r.qft_targets, r.inverse, r.gates);
        }
        CTState operator()(const IqpRecipe& r) const {
            std::vector<DiagonalGate> diag;
            for (const auto& g : r.gates) {
                diag.push_back({g.theta, mask_of(g.qubits)});
            }
            return iqp_state(spec.input, std::move(diag));
        }
        CTState operator()(const FunctionRecipe& r) const {
            std::function<int(std::uint64_t)> f;
            if (r.builtin == "parity") {
                f = boolean_function::parity(mask_of(r.mask));
            } else if (r.builtin == "inner-product") {
                f = boolean_function::inner_product(spec.n);
            } else {
                f = boolean_function::constant();
            }
            const std::uint64_t in = spec.input.value();
            return function_state(spec.n, [f, in](std::uint64_t x) {
                return (std::popcount(x & in) & 1) ? -f(x) : f(x);
            });
        }
        CTState operator()(const ProductRecipe& r) const {
            std::vector<std::array<Amplitude, 2>> qubits;
            for (int i = 0; i < spec.n; ++i) {
                const int b = spec.input[i] ? 1 : 0;
                const Mat2& u = r.unitaries[static_cast<std::size_t>(i)];
                qubits.push_back({u[0][b], u[1][b]});
            }
            return product_state(std::move(qubits));
        }
        CTState operator()(const ExplicitRecipe& r) const { return explicit_state(spec.n, r.amplitudes); }
    };
    return std::visit(Builder{spec}, spec.u1);
}

}  // namespace sparsesim
