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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsesim/circuit.hpp"
#include "sparsesim/circuit_io.hpp"
#include "sparsesim/oracle.hpp"
#include "sparsesim/reconstruct.hpp"
#include "sparsesim/sparse.hpp"

namespace sparsesim {

inline constexpr const char* kEndiannessNote =
    "bits lists the measured qubits in measure order; its first character is the least significant bit of int";

struct RunOptions {
    std::size_t t = 1;
    double epsilon = 0.1;
    double delta = 0.05;
    std::optional<double> theta;
    std::optional<double> pi;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    /// compare: number of seeded repetitions.
    int trials = 100;
    /// simulate: draws to take from the reconstructed distribution.
    std::uint64_t draws = 0;
    /// Leave out the execution block (thread count, wall-clock time) so reports are byte-identical.
    bool reproducible = false;
    FourierScheme scheme = FourierScheme::ControlledShift;
};

struct RunResult {
    Json report;
    bool promise_violated = false;
};

namespace detail {

inline Json string_entry(const BitString& x) { return {{"bits", x.str()}, {"int", x.value()}}; }

inline Json distribution_json(const SparseDistribution& p) {
    Json out = Json::array();
    for (const auto& [x, v] : p.entries()) {
        Json e = string_entry(x);
        e["p"] = v;
        out.push_back(e);
    }
    return out;
}

inline Json amplitude_json(Amplitude a) { return {{"re", a.real()}, {"im", a.imag()}}; }

inline Json state_json(const SparseState& s) {
    Json out = Json::array();
    for (const auto& [x, a] : s.entries()) {
        Json e = string_entry(x);
        e["re"] = a.real();
        e["im"] = a.imag();
        out.push_back(e);
    }
    return out;
}

inline Json search_json(const HeavyHitterList& h) {
    Json sizes = Json::array();
    for (auto s : h.round_sizes) {
        sizes.push_back(s);
    }
    return {{"theta", h.theta},       {"pi", h.pi},
            {"probes", h.probes},     {"halted", h.halted},
            {"halted_round", h.halted_round}, {"probe_cap_reached", h.probe_cap_reached},
            {"round_sizes", sizes},   {"listed", h.entries.size()}};
}

inline ReconstructionParams reconstruction_params(const RunOptions& o) {
    ReconstructionParams p{o.t, o.epsilon, o.delta, o.seed, o.threads};
    p.validate();
    return p;
}

struct DistributionAudit {
    Json json;
    bool ok = true;
};

inline DistributionAudit audit_distribution(const DistributionReport& r, int k, const ReconstructionParams& p) {
    const double t = static_cast<double>(p.t);
    const std::uint64_t cap = probe_count(k, r.theta);
    const double support_bound = 2.0 * t / p.epsilon;
    const double floor = p.epsilon / (8.0 * t);
    const auto& d = r.distribution;
    DistributionAudit a;
    const bool support_ok = static_cast<double>(d.size()) <= support_bound;
    const bool floor_ok = d.empty() || d.min_probability() >= floor;
    const bool probes_ok = r.search.probes <= cap;
    const bool calls_ok = r.oracle_calls <= cap + r.search.entries.size();
    a.ok = support_ok && floor_ok && probes_ok && calls_ok;
    a.json = {{"probe_cap", cap},
              {"probes", r.search.probes},
              {"probe_cap_ok", probes_ok},
              {"oracle_calls", r.oracle_calls},
              {"oracle_call_budget_ok", calls_ok},
              {"support_bound", support_bound},
              {"support_ok", support_ok},
              {"min_probability_bound", floor},
              {"min_probability_ok", floor_ok}};
    return a;
}

inline Json distribution_report_json(const DistributionReport& r) {
    Json refined = Json::array();
    for (std::size_t i = 0; i < r.refined.size(); ++i) {
        Json e = string_entry(r.search.entries[i].x);
        e["search_estimate"] = r.search.entries[i].estimate;
        e["refined_estimate"] = r.refined[i];
        refined.push_back(e);
    }
    return {{"search", search_json(r.search)},
            {"refine_epsilon", r.refine_epsilon},
            {"refined", refined},
            {"raw_mass", r.raw_mass},
            {"dropped", r.dropped}};
}

inline Json params_json(const RunOptions& o) {
    Json p = {{"t", o.t}, {"epsilon", o.epsilon}, {"delta", o.delta}, {"seed", o.seed},
              {"scheme", o.scheme == FourierScheme::Nested ? "nested" : "controlled-shift"}};
    if (o.theta) {
        p["theta"] = *o.theta;
    }
    if (o.pi) {
        p["pi"] = *o.pi;
    }
    return p;
}

inline RunResult run_simulate(const CircuitSpec& spec, const RunOptions& o) {
    const ReconstructionParams p = reconstruction_params(o);
    const CTState ct = build_ct_state(spec);
    const MarginalOracle oracle = make_marginal_oracle(ct, spec.u2, spec.measure, o.scheme);
    const DistributionReport r = reconstruct_distribution(oracle, p);
    const DistributionAudit audit = audit_distribution(r, oracle.width(), p);

    RunResult out;
    Json result = {{"distribution", distribution_json(r.distribution)}};
    if (o.draws > 0 && !r.distribution.empty()) {
        const SparseSampler sampler(r.distribution);
        Rng rng(derive_seed(o.seed, 2));
        Json draws = Json::array();
        for (std::uint64_t i = 0; i < o.draws; ++i) {
            draws.push_back(sampler(rng).str());
        }
        result["draws"] = draws;
    }
    out.report["result"] = result;
    out.report["stages"] = distribution_report_json(r);
    out.report["audit"] = audit.json;
    out.report["samples"] = {{"search", r.search_samples}, {"refine", r.refine_samples}, {"total", r.samples()}};
    Json violations = r.promise_violations;
    if (!audit.ok) {
        violations.push_back("hard bound audit failed");
    }
    out.report["diagnostics"] = {{"promise_violations", violations}, {"anomalies", r.anomalies}};
    out.promise_violated = !violations.empty();
    return out;
}

inline RunResult run_state(const CircuitSpec& spec, const RunOptions& o) {
    const ReconstructionParams p = reconstruction_params(o);
    const CTState ct = build_ct_state(spec);
    const StateReport r = reconstruct_state(ct, spec.u2, spec.measure, p);
    ReconstructionParams stage = p;
    stage.delta = p.delta / 2.0;
    const DistributionAudit audit = audit_distribution(r.distribution, spec.n, stage);

    RunResult out;
    Json estimates = Json::array();
    for (std::size_t i = 0; i < r.amplitude_estimates.size(); ++i) {
        Json e = string_entry(r.state.entries()[i].first);
        e["estimate"] = amplitude_json(r.amplitude_estimates[i]);
        estimates.push_back(e);
    }
    out.report["result"] = {{"state", state_json(r.state)}, {"norm", r.state.norm()}};
    Json stages = distribution_report_json(r.distribution);
    stages["amplitude_epsilon"] = r.amplitude_epsilon;
    stages["amplitude_delta"] = r.amplitude_delta;
    stages["amplitude_estimates"] = estimates;
    out.report["stages"] = stages;
    out.report["audit"] = audit.json;
    out.report["samples"] = {{"search", r.distribution.search_samples},
                             {"refine", r.distribution.refine_samples},
                             {"amplitudes", r.amplitude_samples},
                             {"total", r.samples()}};
    Json violations = r.distribution.promise_violations;
    if (!audit.ok) {
        violations.push_back("hard bound audit failed");
    }
    out.report["diagnostics"] = {{"promise_violations", violations}, {"anomalies", r.anomalies}};
    out.promise_violated = !violations.empty();
    return out;
}

inline RunResult run_weights(const CircuitSpec& spec, const RunOptions& o) {
    const double theta = o.theta.value_or(o.epsilon);
    const double pi = o.pi.value_or(o.delta);
    const CTState psi = build_ct_state(spec);
    const WeightReport r =
        significant_weights(psi, spec.u2, spec.measure, theta, pi, {o.epsilon, o.delta, o.seed, o.threads});

    RunResult out;
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j = string_entry(e.x);
        j["weight"] = e.weight;
        j["coefficient"] = amplitude_json(e.coefficient);
        entries.push_back(j);
    }
    out.report["result"] = {{"weights", entries}, {"theta", r.theta}, {"pi", r.pi}};
    out.report["stages"] = {{"search", search_json(r.search)}};
    const std::uint64_t cap = probe_count(spec.n, theta);
    out.report["audit"] = {{"probe_cap", cap}, {"probe_cap_ok", r.search.probes <= cap},
                           {"list_bound", 2.0 / theta},
                           {"list_ok", static_cast<double>(r.entries.size()) <= 2.0 / theta}};
    out.report["samples"] = {{"search", r.search.samples}, {"coefficients", r.coefficient_samples}, {"total", r.samples()}};
    Json violations = Json::array();
    if (r.search.halted) {
        violations.push_back("search halted");
    }
    out.report["diagnostics"] = {{"promise_violations", violations}, {"anomalies", r.anomalies}};
    out.promise_violated = !violations.empty();
    return out;
}

inline RunResult run_oracle(const CircuitSpec& spec) {
    const DenseState s = dense_simulate(spec);
    const std::vector<double> dist = exact_distribution(s, spec.measure);
    const int k = static_cast<int>(spec.measure.size());
    Json entries = Json::array();
    for (std::uint64_t x = 0; x < dist.size(); ++x) {
        if (dist[x] > 1e-15) {
            Json e = string_entry(BitString(k, x));
            e["p"] = dist[x];
            entries.push_back(e);
        }
    }
    RunResult out;
    out.report["result"] = {{"distribution", entries}, {"norm", s.norm()}};
    if (k == spec.n) {
        const auto amps = measured_amplitudes(s, spec.measure);
        Json st = Json::array();
        for (std::uint64_t x = 0; x < amps.size(); ++x) {
            if (std::norm(amps[x]) > 1e-15) {
                Json e = string_entry(BitString(k, x));
                e["re"] = amps[x].real();
                e["im"] = amps[x].imag();
                st.push_back(e);
            }
        }
        out.report["result"]["state"] = st;
    }
    out.report["diagnostics"] = {{"promise_violations", Json::array()}, {"anomalies", 0}};
    return out;
}

inline RunResult run_compare(const CircuitSpec& spec, const RunOptions& o) {
    if (o.trials < 1) {
        throw InputError("compare: --trials must be positive");
    }
    const ReconstructionParams base = reconstruction_params(o);
    const std::vector<double> exact = exact_distribution(dense_simulate(spec), spec.measure);
    const CTState ct = build_ct_state(spec);
    const MarginalOracle oracle = make_marginal_oracle(ct, spec.u2, spec.measure, o.scheme);
    const double bound = 12.0 * o.epsilon;
    int successes = 0;
    int audit_failures = 0;
    int flagged = 0;
    double worst = 0.0;
    Json errors = Json::array();
    std::uint64_t samples = 0;
    for (int i = 0; i < o.trials; ++i) {
        ReconstructionParams p = base;
        p.seed = derive_seed(o.seed, static_cast<std::uint64_t>(i));
        const DistributionReport r = reconstruct_distribution(oracle, p);
        const double err = l1_distance(r.distribution, exact);
        successes += err <= bound ? 1 : 0;
        audit_failures += audit_distribution(r, oracle.width(), p).ok ? 0 : 1;
        flagged += r.promise_violated() ? 1 : 0;
        worst = std::max(worst, err);
        errors.push_back(err);
        samples += r.samples();
    }
    const double n = static_cast<double>(o.trials);
    const double rate = successes / n;
    const double target = 1.0 - o.delta;
    const double slack_target = target - 3.0 * std::sqrt(o.delta * (1.0 - o.delta) / n);
    RunResult out;
    out.report["result"] = {{"trials", o.trials},
                            {"l1_bound", bound},
                            {"successes", successes},
                            {"success_rate", rate},
                            {"target", target},
                            {"target_with_slack", slack_target},
                            {"meets_target", rate >= slack_target},
                            {"worst_l1", worst},
                            {"l1_errors", errors}};
    out.report["audit"] = {{"hard_bound_failures", audit_failures}};
    out.report["samples"] = {{"total", samples}};
    out.report["diagnostics"] = {{"promise_violations", Json::array()}, {"runs_with_diagnostics", flagged}};
    out.promise_violated = audit_failures > 0;
    return out;
}

}  // namespace detail

/// Runs one CLI command ("simulate", "state", "weights", "oracle", "compare") and builds its report.
inline RunResult run_command(const std::string& command, const CircuitSpec& spec, const RunOptions& options) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    RunResult r;
    if (command == "simulate") {
        r = detail::run_simulate(spec, options);
    } else if (command == "state") {
        r = detail::run_state(spec, options);
    } else if (command == "weights") {
        r = detail::run_weights(spec, options);
    } else if (command == "oracle") {
        r = detail::run_oracle(spec);
    } else if (command == "compare") {
        r = detail::run_compare(spec, options);
    } else {
        throw InputError("unknown command '" + command + "'");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.report["command"] = command;
    r.report["params"] = detail::params_json(options);
    r.report["seed"] = options.seed;
    r.report["circuit"] = {{"n", spec.n}, {"measure", spec.measure}};
    r.report["endianness"] = kEndiannessNote;
    if (!options.reproducible) {
        r.report["execution"] = {{"threads", options.threads}, {"wall_clock_seconds", seconds}};
    }
    return r;
}

}  // namespace sparsesim
