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

// sparsesim: reconstruct sparse output distributions and states of two-block circuits.
//
// Exit status: 0 success, 1 usage or input error, 2 promise violation under --strict.

#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sparsesim/sparsesim.hpp"

namespace {

struct Flags {
    std::string circuit;
    std::string out;
    bool strict = false;
    std::string scheme = "controlled-shift";
    std::optional<double> theta;
    std::optional<double> pi;
    sparsesim::RunOptions options;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Flags& f, bool sampling) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--circuit", f.circuit, "circuit JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "write the report here instead of stdout");
    if (!sampling) {
        return sub;
    }
    auto& o = f.options;
    sub->add_option("--t", o.t, "promised sparsity t")->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", o.epsilon, "accuracy epsilon");
    sub->add_option("--delta", o.delta, "failure probability delta");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--threads", o.threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_flag("--strict", f.strict, "exit with status 2 when a promise violation is detected");
    sub->add_flag("--reproducible", o.reproducible, "omit thread count and wall-clock time from the report");
    sub->add_option("--scheme", f.scheme, "QFT marginal estimator")
        ->check(CLI::IsMember({"controlled-shift", "nested"}));
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical simulation of quantum circuits with approximately sparse outputs"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* simulate = add_command(app, "simulate", "reconstruct the output distribution", f, true);
    simulate->add_option("--draws", f.options.draws, "samples to draw from the reconstructed distribution");
    add_command(app, "state", "reconstruct the output state with phases", f, true);
    CLI::App* weights = add_command(app, "weights", "large coefficients of U1|input> in the basis of U2", f, true);
    weights->add_option("--theta", f.theta, "weight threshold (default: epsilon)");
    weights->add_option("--pi", f.pi, "search failure probability (default: delta)");
    add_command(app, "oracle", "exact dense distribution (n <= 16)", f, false);
    CLI::App* compare = add_command(app, "compare", "repeat simulate and score it against the dense oracle", f, true);
    compare->add_option("--trials", f.options.trials, "number of seeded repetitions")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    f.options.theta = f.theta;
    f.options.pi = f.pi;
    f.options.scheme =
        f.scheme == "nested" ? sparsesim::FourierScheme::Nested : sparsesim::FourierScheme::ControlledShift;

    sparsesim::RunResult result;
    try {
        const sparsesim::CircuitSpec spec = sparsesim::parse_circuit(f.circuit);
        result = sparsesim::run_command(command, spec, f.options);
    } catch (const sparsesim::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string text = result.report.dump(2) + "\n";
    if (f.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << f.out << "\n";
            return 1;
        }
        out << text;
    }
    if (result.promise_violated) {
        std::cerr << "warning: promise violation detected, see diagnostics\n";
        if (f.strict) {
            return 2;
        }
    }
    return 0;
}
