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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/ct_state.hpp"
#include "sparsesim/estimator.hpp"
#include "sparsesim/km_search.hpp"
#include "sparsesim/marginals.hpp"
#include "sparsesim/sparse.hpp"

namespace sparsesim {

struct ReconstructionParams {
    std::size_t t = 1;
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const {
        if (t < 1) {
            throw InputError("reconstruction: t must be at least 1");
        }
        if (!(epsilon > 0.0 && epsilon <= 1.0 / 6.0)) {
            throw InputError("reconstruction: epsilon must lie in (0, 1/6]");
        }
        if (!(delta > 0.0 && delta < 1.0)) {
            throw InputError("reconstruction: delta must lie in (0, 1)");
        }
    }

    /// Search threshold theta = eps/t.
    double theta() const { return epsilon / static_cast<double>(t); }
    /// Per-call failure pi = delta / (2t/eps + 1).
    double pi() const { return delta / (2.0 * static_cast<double>(t) / epsilon + 1.0); }
};

/// Full-string probability evaluator used to refine listed strings.
using PointOracle = std::function<MarginalEstimate(const BitString& x, const EstimationParams& params)>;

struct DistributionReport {
    SparseDistribution distribution;
    HeavyHitterList search;
    double theta = 0.0;
    double pi = 0.0;
    /// Accuracy of each refinement call, min(eps/|L|, eps/4t).
    double refine_epsilon = 0.0;
    /// Refined estimates c(x), aligned with search.entries.
    std::vector<double> refined;
    /// ||C||_1 before normalization.
    double raw_mass = 0.0;
    /// Entries removed because their normalized value fell below eps/8t.
    std::size_t dropped = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t search_samples = 0;
    std::uint64_t refine_samples = 0;
    std::uint64_t anomalies = 0;
    std::vector<std::string> promise_violations;

    std::uint64_t samples() const { return search_samples + refine_samples; }
    bool promise_violated() const { return !promise_violations.empty(); }
};

/// P' for a distribution promised to be eps-approximately t-sparse.
///
/// Runs km_search at theta = eps/t and failure pi, refines each listed probability at
/// accuracy min(eps/|L|, eps/4t) with failure pi, and normalizes the refined values.
/// Listed strings whose normalized value is below eps/8t are removed (and the rest
/// renormalized); under the promise and accurate estimates this never happens.
inline DistributionReport reconstruct_distribution(const MarginalOracle& oracle, const PointOracle& full_prob,
                                                   const ReconstructionParams& params) {
    params.validate();
    const int k = oracle.width();
    const double eps = params.epsilon;
    const double t = static_cast<double>(params.t);

    DistributionReport r;
    r.theta = params.theta();
    r.pi = params.pi();
    r.search = km_search(oracle, k, r.theta, r.pi, derive_seed(params.seed, 0), params.threads);
    r.oracle_calls = r.search.probes;
    r.search_samples = r.search.samples;
    r.anomalies = r.search.anomalies;
    r.distribution = SparseDistribution(k);

    if (r.search.halted) {
        r.promise_violations.push_back(r.search.probe_cap_reached ? "search exhausted the probe budget"
                                                                  : "search list exceeded 2/theta entries");
        return r;
    }
    const auto& list = r.search.entries;
    if (list.empty()) {
        r.promise_violations.push_back("no string reached the search threshold");
        return r;
    }

    r.refine_epsilon = std::min(eps / static_cast<double>(list.size()), eps / (4.0 * t));
    const std::uint64_t refine_seed = derive_seed(params.seed, 1);
    for (std::size_t i = 0; i < list.size(); ++i) {
        const EstimationParams p{r.refine_epsilon, r.pi, derive_seed(refine_seed, i), params.threads};
        const MarginalEstimate e = full_prob(list[i].x, p);
        ++r.oracle_calls;
        r.refine_samples += e.samples;
        r.anomalies += e.anomalies;
        r.refined.push_back(e.probability);
    }
    r.raw_mass = std::accumulate(r.refined.begin(), r.refined.end(), 0.0);
    if (r.raw_mass < 1.0 - 3.0 * eps || r.raw_mass > 1.0 + 3.0 * eps) {
        r.promise_violations.push_back("refined mass " + std::to_string(r.raw_mass) +
                                       " outside [1 - 3 eps, 1 + 3 eps]");
    }
    if (!(r.raw_mass > 0.0)) {
        r.promise_violations.push_back("all refined probabilities are zero");
        return r;
    }

    const double floor = eps / (8.0 * t);
    std::vector<std::pair<BitString, double>> kept;
    double kept_mass = 0.0;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (r.refined[i] / r.raw_mass >= floor) {
            kept.emplace_back(list[i].x, r.refined[i]);
            kept_mass += r.refined[i];
        } else {
            ++r.dropped;
        }
    }
    if (r.dropped > 0) {
        r.promise_violations.push_back(std::to_string(r.dropped) + " listed strings fell below eps/8t");
    }
    for (auto& e : kept) {
        e.second /= kept_mass;
    }
    r.distribution = SparseDistribution(k, std::move(kept));
    return r;
}

/// Same, refining with the oracle's own full-length prefixes.
inline DistributionReport reconstruct_distribution(const MarginalOracle& oracle, const ReconstructionParams& params) {
    return reconstruct_distribution(
        oracle, [&oracle](const BitString& x, const EstimationParams& p) { return oracle(x, p); }, params);
}

/// Estimate of p(x) for a full measured string x (the m = k marginal).
inline MarginalEstimate point_probability(const CTState& ct, const U2Block& u2, const std::vector<int>& measure,
                                          const BitString& x, const EstimationParams& params) {
    if (x.size() != static_cast<int>(measure.size())) {
        throw InputError("point_probability: string length differs from the measured register");
    }
    return make_marginal_oracle(ct, u2, measure)(x, params);
}

namespace detail {

inline void require_full_measure(const std::vector<int>& measure, int n, const char* what) {
    check_subset(measure, n, what);
    if (static_cast<int>(measure.size()) != n) {
        throw InputError(std::string(what) + ": every qubit must be measured");
    }
}

/// The full-register basis string whose measured bits (in measure order) are y.
inline std::uint64_t register_string(const BitString& y, const std::vector<int>& measure) {
    return scatter_bits(0, y.value(), measure);
}

}  // namespace detail

/// The CT state U2^dagger |x> for a full-register basis string x.
inline CTState adjoint_image(const U2Block& u2, const BitString& x) {
    const int n = x.size();
    if (const auto* q = std::get_if<QftBlock>(&u2)) {
        return qft_image_state(n, x, q->targets, !q->inverse);
    }
    const auto& p = std::get<ProductBlock>(u2);
    if (static_cast<int>(p.unitaries.size()) != n) {
        throw InputError("adjoint_image: need one unitary per qubit");
    }
    std::vector<std::array<Amplitude, 2>> qubits;
    for (int q = 0; q < n; ++q) {
        const Mat2& u = p.unitaries[static_cast<std::size_t>(q)];
        const int b = x[q] ? 1 : 0;
        qubits.push_back({std::conj(u[b][0]), std::conj(u[b][1])});
    }
    return product_state(std::move(qubits));
}

/// Estimate of <y|U2|ct> with y in measure order; measure must list every qubit.
inline Estimate output_amplitude(const CTState& ct, const U2Block& u2, const std::vector<int>& measure,
                                 const BitString& y, const EstimationParams& params) {
    const int n = ct.num_qubits();
    detail::require_full_measure(measure, n, "output_amplitude");
    if (y.size() != n) {
        throw InputError("output_amplitude: string length differs from the register");
    }
    const BitString x(n, detail::register_string(y, measure));
    return overlap(adjoint_image(u2, x), ct, params);
}

struct PhaseEstimate {
    Amplitude phase{1.0, 0.0};
    /// Estimate was exactly zero; the phase defaults to 1.
    bool anomaly = false;
    /// |c| fell below the caller's floor, so the 2 alpha/floor error bound does not apply.
    bool below_floor = false;
};

/// c/|c|. If c is alpha-close to a value of modulus >= floor, the phase is within 2 alpha/floor.
inline PhaseEstimate extract_phase(Amplitude c, double magnitude_floor = 0.0) {
    const double a = std::abs(c);
    if (a == 0.0) {
        return {{1.0, 0.0}, true, magnitude_floor > 0.0};
    }
    return {c / a, false, a < magnitude_floor};
}

struct StateReport {
    SparseState state;
    DistributionReport distribution;
    double amplitude_epsilon = 0.0;
    double amplitude_delta = 0.0;
    std::vector<Amplitude> amplitude_estimates;
    std::uint64_t amplitude_samples = 0;
    std::uint64_t anomalies = 0;

    std::uint64_t samples() const { return distribution.samples() + amplitude_samples; }
    bool promise_violated() const { return distribution.promise_violated(); }
};

/// Sparse approximation of U2|ct>, promised sqrt(eps)-approximately t-sparse.
///
/// delta/2 goes to the distribution stage; each listed amplitude is estimated at accuracy
/// sqrt(eps^3/8t) with failure (delta/2)/|L|, and only its phase is kept. Strings are in
/// measure order, which must list every qubit.
inline StateReport reconstruct_state(const CTState& ct, const U2Block& u2, const std::vector<int>& measure,
                                     const ReconstructionParams& params) {
    params.validate();
    const int n = ct.num_qubits();
    detail::require_full_measure(measure, n, "reconstruct_state");

    StateReport r;
    ReconstructionParams stage = params;
    stage.delta = params.delta / 2.0;
    stage.seed = derive_seed(params.seed, 0);
    r.distribution = reconstruct_distribution(make_marginal_oracle(ct, u2, measure), stage);
    r.anomalies = r.distribution.anomalies;
    const auto& support = r.distribution.distribution.entries();
    r.state = SparseState(n);
    if (support.empty()) {
        return r;
    }

    const double eps = params.epsilon;
    const double t = static_cast<double>(params.t);
    r.amplitude_epsilon = std::sqrt(eps * eps * eps / (8.0 * t));
    r.amplitude_delta = params.delta / 2.0 / static_cast<double>(support.size());
    const std::uint64_t amp_seed = derive_seed(params.seed, 1);
    std::vector<std::pair<BitString, Amplitude>> out;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& [y, p] = support[i];
        const Estimate a = output_amplitude(
            ct, u2, measure, y, {r.amplitude_epsilon, r.amplitude_delta, derive_seed(amp_seed, i), params.threads});
        r.amplitude_samples += a.samples_used;
        r.anomalies += a.anomalies;
        r.amplitude_estimates.push_back(a.value);
        const PhaseEstimate ph = extract_phase(a.value);
        r.anomalies += ph.anomaly ? 1 : 0;
        out.emplace_back(y, ph.phase * std::sqrt(p));
    }
    r.state = normalize(SparseState(n, std::move(out)));
    return r;
}

struct WeightEntry {
    BitString x;
    /// Search estimate of |psi_hat_x|^2.
    double weight = 0.0;
    /// Estimate of psi_hat_x = <x|B^dagger|psi>.
    Amplitude coefficient;
};

struct WeightReport {
    std::vector<WeightEntry> entries;
    double theta = 0.0;
    double pi = 0.0;
    HeavyHitterList search;
    std::uint64_t coefficient_samples = 0;
    std::uint64_t anomalies = 0;

    std::uint64_t samples() const { return search.samples + coefficient_samples; }
};

/// Strings with large weight |<x|B^dagger|psi>|^2 in the basis given by the columns of B.
///
/// Every x with weight >= theta is listed and every listed x has weight >= theta/2, with
/// probability >= 1 - pi. Each listed coefficient is then estimated at `coefficient`
/// accuracy/failure. `measure` must list every qubit (B's QFT targets for a QFT basis).
inline WeightReport significant_weights(const CTState& psi, const U2Block& basis, const std::vector<int>& measure,
                                        double theta, double pi, const EstimationParams& coefficient) {
    coefficient.validate();
    const int n = psi.num_qubits();
    detail::require_full_measure(measure, n, "significant_weights");
    const U2Block inverse = adjoint(basis);

    WeightReport r;
    r.theta = theta;
    r.pi = pi;
    r.search = km_search(make_marginal_oracle(psi, inverse, measure), n, theta, pi,
                         derive_seed(coefficient.seed, 0), coefficient.threads);
    r.anomalies = r.search.anomalies;
    const std::uint64_t coeff_seed = derive_seed(coefficient.seed, 1);
    for (std::size_t i = 0; i < r.search.entries.size(); ++i) {
        const auto& h = r.search.entries[i];
        const Estimate c = output_amplitude(
            psi, inverse, measure, h.x,
            coefficient.with(coefficient.epsilon, coefficient.delta, derive_seed(coeff_seed, i)));
        r.coefficient_samples += c.samples_used;
        r.anomalies += c.anomalies;
        r.entries.push_back({h.x, h.estimate, c.value});
    }
    return r;
}

}  // namespace sparsesim
