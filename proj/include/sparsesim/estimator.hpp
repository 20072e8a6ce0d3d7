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

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sparsesim/basis_op.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/random.hpp"

namespace sparsesim {

/// Accuracy / confidence of one randomized estimate. `threads` only affects wall-clock time.
struct EstimationParams {
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
            throw InputError("estimation: epsilon must be positive");
        }
        if (!(delta > 0.0 && delta < 1.0)) {
            throw InputError("estimation: delta must lie in (0, 1)");
        }
    }

    EstimationParams with(double eps, double del, std::uint64_t s) const { return {eps, del, s, threads}; }
};

struct Estimate {
    Amplitude value;
    std::uint64_t samples_used = 0;
    EstimationParams params;
    /// Samples whose weight evaluated to zero although they were drawn; each contributed 0.
    std::uint64_t anomalies = 0;
};

/// ceil(4/eps^2 ln(4/delta)): samples for a complex mean of |X| <= 1 to be eps-close w.p. >= 1 - delta.
inline std::uint64_t chernoff_sample_count(double epsilon, double delta) {
    EstimationParams{epsilon, delta}.validate();
    return static_cast<std::uint64_t>(std::ceil(4.0 / (epsilon * epsilon) * std::log(4.0 / delta)));
}

/// ceil(16/eps^2 ln(8/delta)): samples per stream of the two-stream overlap estimator.
inline std::uint64_t overlap_sample_count(double epsilon, double delta) {
    EstimationParams{epsilon, delta}.validate();
    return static_cast<std::uint64_t>(std::ceil(16.0 / (epsilon * epsilon) * std::log(8.0 / delta)));
}

namespace detail {

struct Term {
    Amplitude value;
    bool anomaly = false;
};

struct BlockSum {
    Amplitude sum;
    std::uint64_t anomalies = 0;
};

/// Mean of `count` draws of term(rng), block-seeded from `seed`.
template <class TermFn>
std::pair<Amplitude, std::uint64_t> sampled_mean(std::uint64_t count, std::uint64_t seed, unsigned threads,
                                                 const TermFn& term) {
    auto blocks = run_blocks<BlockSum>(count, threads, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
        Rng rng(derive_seed(seed, b));
        BlockSum acc;
        for (std::uint64_t i = begin; i < end; ++i) {
            const Term t = term(rng);
            acc.sum += t.value;
            acc.anomalies += t.anomaly ? 1 : 0;
        }
        return acc;
    });
    Amplitude total;
    std::uint64_t anomalies = 0;
    for (const auto& b : blocks) {
        total += b.sum;
        anomalies += b.anomalies;
    }
    return {count == 0 ? Amplitude{} : total / static_cast<double>(count), anomalies};
}

}  // namespace detail

/// Monte Carlo estimate of <F> = sum_x p_x F(x) from T = ceil(4/eps^2 ln(4/delta)) draws.
///
/// `draw(Rng&)` samples x from p, `f(x)` must satisfy |f(x)| <= 1 for the guarantee
/// |value - <F>| <= eps with probability >= 1 - delta to apply. Both must be safe to call
/// concurrently when params.threads > 1.
template <class Draw, class Eval>
Estimate chernoff_mean(Draw&& draw, Eval&& f, const EstimationParams& params) {
    params.validate();
    const std::uint64_t t = chernoff_sample_count(params.epsilon, params.delta);
    auto [mean, anomalies] = detail::sampled_mean(t, params.seed, params.threads, [&](Rng& rng) {
        return detail::Term{Amplitude(f(draw(rng))), false};
    });
    return {mean, t, params, anomalies};
}

/// Estimate of <phi|psi> by the two-stream split.
///
/// With p_x = |<x|psi>|^2 and q_x = |<x|phi>|^2, strings where p_x >= q_x are covered by
/// F(x) = <phi|x><x|psi>/p_x sampled from psi, the rest by G(x) = <phi|x><x|psi>/q_x sampled
/// from phi. Both are bounded by 1; each mean uses T = ceil(16/eps^2 ln(8/delta)) draws, so
/// samples_used = 2T.
inline Estimate overlap(const CTState& phi, const CTState& psi, const EstimationParams& params) {
    params.validate();
    if (phi.num_qubits() != psi.num_qubits()) {
        throw InputError("overlap: states have different qubit counts");
    }
    const std::uint64_t t = overlap_sample_count(params.epsilon, params.delta);
    auto [mean_f, anomalies_f] = detail::sampled_mean(t, derive_seed(params.seed, 0), params.threads, [&](Rng& rng) {
        const std::uint64_t x = psi.sample_bits(rng);
        const Amplitude a = psi.amplitude_at(x);
        const Amplitude b = phi.amplitude_at(x);
        const double p = std::norm(a);
        if (p == 0.0) {
            return detail::Term{{}, true};
        }
        return detail::Term{p >= std::norm(b) ? std::conj(b) * a / p : Amplitude{}, false};
    });
    auto [mean_g, anomalies_g] = detail::sampled_mean(t, derive_seed(params.seed, 1), params.threads, [&](Rng& rng) {
        const std::uint64_t x = phi.sample_bits(rng);
        const Amplitude a = psi.amplitude_at(x);
        const Amplitude b = phi.amplitude_at(x);
        const double q = std::norm(b);
        if (q == 0.0) {
            return detail::Term{{}, true};
        }
        return detail::Term{std::norm(a) < q ? std::conj(b) * a / q : Amplitude{}, false};
    });
    return {mean_f + mean_g, 2 * t, params, anomalies_f + anomalies_g};
}

/// Estimate of <phi|A|psi> for a basis-preserving A, as the overlap of phi with the CT state A|psi>.
inline Estimate overlap_with_op(const CTState& phi, const BasisPreservingOp& op, const CTState& psi,
                                const EstimationParams& params) {
    return overlap(phi, operator_image(op, psi), params);
}

/// The two (n+k)-qubit states whose complete overlap equals <phi|(|xi><chi| (x) I)|psi>.
///
/// Registers: A = positions [0, k), B = [k, n), A' = [n, n+k).
///   first(a, b, a')  = phi(a, b) chi(a')
///   second(a, b, a') = xi(a) psi(a', b)
struct OverlapReduction {
    CTState first;
    CTState second;
};

inline OverlapReduction partial_overlap_reduction(const CTState& phi, const CTState& xi, const CTState& chi,
                                                  const CTState& psi) {
    const int n = phi.num_qubits();
    const int k = xi.num_qubits();
    if (psi.num_qubits() != n || chi.num_qubits() != k) {
        throw InputError("partial_overlap: phi/psi or xi/chi widths differ");
    }
    if (k > n) {
        throw InputError("partial_overlap: projector wider than the register");
    }
    // tensor(xi, psi) lists xi's k qubits, then psi's n qubits (a' first, then b).
    std::vector<int> positions;
    for (int i = 0; i < k; ++i) {
        positions.push_back(i);
    }
    for (int j = 0; j < n; ++j) {
        positions.push_back(j < k ? n + j : j);
    }
    return {tensor(phi, chi), permuted(tensor(xi, psi), std::move(positions))};
}

/// Estimate of <phi|(|xi><chi| (x) I)|psi>, with the projector on the first k qubits.
inline Estimate partial_overlap(const CTState& phi, const CTState& xi, const CTState& chi, const CTState& psi,
                                const EstimationParams& params) {
    const OverlapReduction r = partial_overlap_reduction(phi, xi, chi, psi);
    return overlap(r.first, r.second, params);
}

}  // namespace sparsesim
