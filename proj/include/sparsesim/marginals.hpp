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
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sparsesim/basis_op.hpp"
#include "sparsesim/circuit.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/estimator.hpp"

namespace sparsesim {

struct MarginalEstimate {
    /// Real part of the raw estimate, clamped to [0, 1].
    double probability = 0.0;
    Amplitude raw;
    std::uint64_t samples = 0;
    std::uint64_t anomalies = 0;
    /// |Im raw| exceeded the requested accuracy; the true quantity is real.
    bool imaginary_residue = false;
};

inline MarginalEstimate finish_marginal(Amplitude raw, std::uint64_t samples, std::uint64_t anomalies,
                                        double epsilon) {
    return {std::clamp(raw.real(), 0.0, 1.0), raw, samples, anomalies, std::abs(raw.imag()) > epsilon};
}

/// An additive-error estimator of prefix marginals p(y_1 ... y_m) of a k-bit distribution.
class MarginalOracle {
   public:
    using Fn = std::function<MarginalEstimate(const BitString& prefix, const EstimationParams& params)>;

    MarginalOracle(int width, Fn fn) : width_(width), fn_(std::move(fn)) {
        if (width < 1 || width > kMaxQubits) {
            throw InputError("MarginalOracle: width must lie in [1, 63]");
        }
    }

    int width() const { return width_; }

    MarginalEstimate operator()(const BitString& prefix, const EstimationParams& params) const {
        if (prefix.size() < 1 || prefix.size() > width_) {
            throw InputError("marginal: prefix length " + std::to_string(prefix.size()) + " outside [1, " +
                             std::to_string(width_) + "]");
        }
        params.validate();
        return fn_(prefix, params);
    }

   private:
    int width_;
    Fn fn_;
};

enum class FourierScheme {
    /// One overlap <Phi|A|Phi> on the register extended by the m-qubit shift counter u:
    /// Phi = CT (x) uniform(u), A = sum_u N^u (x) |u><u|.
    ControlledShift,
    /// Outer Chernoff over K uniform draws of u, each term an independent overlap estimate at
    /// accuracy eps/2 and failure delta/(2K).
    Nested,
};

/// Outer draw count of the nested scheme: ceil(4/(eps/2)^2 ln(8/delta)).
inline std::uint64_t nested_outer_count(double epsilon, double delta) {
    return chernoff_sample_count(epsilon / 2.0, delta / 2.0);
}

/// Marginal p(y) of the first m measured qubits after the QFT block, for ct = U1|input>.
///
/// p(y) = 2^-m sum_u <CT| N^u (x) I |CT> with N = alpha^y X^(+-2^(k-m)) on the QFT targets.
inline MarginalEstimate fourier_marginal(const CTState& ct, const QftBlock& block, const BitString& y,
                                         const EstimationParams& params,
                                         FourierScheme scheme = FourierScheme::ControlledShift) {
    params.validate();
    const int k = static_cast<int>(block.targets.size());
    const int m = y.size();
    if (m < 1 || m > k) {
        throw InputError("fourier_marginal: prefix length must lie in [1, k]");
    }
    const int n = ct.num_qubits();
    check_subset(block.targets, n, "fourier_marginal targets");
    const WeylShift shift(y.value(), m, k, block.inverse ? -1 : +1);

    if (scheme == FourierScheme::ControlledShift) {
        const CTState extended = tensor(ct, function_state(m, boolean_function::constant()));
        const Estimate e = overlap_with_op(extended, shift.controlled(block.targets, n), extended, params);
        return finish_marginal(e.value, e.samples_used, e.anomalies, params.epsilon);
    }

    const std::uint64_t outer = nested_outer_count(params.epsilon, params.delta);
    Rng draw(derive_seed(params.seed, 0));
    Amplitude total;
    std::uint64_t samples = 0;
    std::uint64_t anomalies = 0;
    for (std::uint64_t i = 0; i < outer; ++i) {
        const std::uint64_t u = draw.bits(m);
        const BasisPreservingOp op = shift.power_op(u).embedded(block.targets, n);
        const Estimate e = overlap_with_op(
            ct, op, ct,
            params.with(params.epsilon / 2.0, params.delta / (2.0 * static_cast<double>(outer)),
                        derive_seed(params.seed, i + 1)));
        total += e.value;
        samples += e.samples_used;
        anomalies += e.anomalies;
    }
    return finish_marginal(total / static_cast<double>(outer), samples, anomalies, params.epsilon);
}

/// The qubit relabeling that moves measure[0..m) to positions 0..m-1 and keeps the remaining
/// qubits in ascending order behind them; result[q] is the new position of qubit q.
inline std::vector<int> measured_to_front(const std::vector<int>& measure, int m, int n) {
    std::vector<int> position(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < m; ++i) {
        position[static_cast<std::size_t>(measure[static_cast<std::size_t>(i)])] = i;
    }
    int next = m;
    for (int q = 0; q < n; ++q) {
        if (position[static_cast<std::size_t>(q)] < 0) {
            position[static_cast<std::size_t>(q)] = next++;
        }
    }
    return position;
}

/// Marginal p(y) of the first m entries of `measure` after the product block.
///
/// p(y) = <CT|(|alpha><alpha| (x) I)|CT> with |alpha> = (x)_i u_{measure[i]}^dagger |y_i>, after the
/// measured qubits are moved to the front.
inline MarginalEstimate product_marginal(const CTState& ct, const ProductBlock& block,
                                         const std::vector<int>& measure, const BitString& y,
                                         const EstimationParams& params) {
    params.validate();
    const int n = ct.num_qubits();
    const int m = y.size();
    if (m < 1 || m > static_cast<int>(measure.size())) {
        throw InputError("product_marginal: prefix length must lie in [1, |measure|]");
    }
    check_subset(measure, n, "product_marginal measure");
    if (static_cast<int>(block.unitaries.size()) != n) {
        throw InputError("product_marginal: need one unitary per qubit");
    }
    const CTState front = permuted(ct, measured_to_front(measure, m, n));
    std::vector<std::array<Amplitude, 2>> alpha;
    for (int i = 0; i < m; ++i) {
        const Mat2& u = block.unitaries[static_cast<std::size_t>(measure[static_cast<std::size_t>(i)])];
        const int b = y[i] ? 1 : 0;
        alpha.push_back({std::conj(u[b][0]), std::conj(u[b][1])});
    }
    const CTState a = product_state(std::move(alpha));
    const Estimate e = partial_overlap(front, a, a, front, params);
    return finish_marginal(e.value, e.samples_used, e.anomalies, params.epsilon);
}

/// Marginal oracle for the circuit whose first block produced `ct`.
inline MarginalOracle make_marginal_oracle(CTState ct, U2Block u2, std::vector<int> measure,
                                           FourierScheme scheme = FourierScheme::ControlledShift) {
    const int k = static_cast<int>(measure.size());
    if (const auto* q = std::get_if<QftBlock>(&u2)) {
        if (q->targets != measure) {
            throw InputError("marginal oracle: the QFT block must measure exactly its targets");
        }
        QftBlock block = *q;
        return MarginalOracle(k, [ct, block, scheme](const BitString& y, const EstimationParams& p) {
            return fourier_marginal(ct, block, y, p, scheme);
        });
    }
    ProductBlock block = std::get<ProductBlock>(u2);
    return MarginalOracle(k, [ct, block, measure](const BitString& y, const EstimationParams& p) {
        return product_marginal(ct, block, measure, y, p);
    });
}

/// Marginal oracle of any distribution that can be sampled: p(y) is the mean of the prefix
/// indicator over ceil(4/eps^2 ln(4/delta)) draws.
inline MarginalOracle sampled_marginal_oracle(int width, std::function<std::uint64_t(Rng&)> draw) {
    return MarginalOracle(width, [draw = std::move(draw)](const BitString& y, const EstimationParams& p) {
        const std::uint64_t mask = low_mask(y.size());
        const std::uint64_t target = y.value();
        const Estimate e = chernoff_mean([&](Rng& rng) { return draw(rng); },
                                         [&](std::uint64_t x) { return (x & mask) == target ? 1.0 : 0.0; }, p);
        return finish_marginal(e.value, e.samples_used, e.anomalies, p.epsilon);
    });
}

}  // namespace sparsesim
