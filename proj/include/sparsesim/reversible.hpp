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
#include <cstdint>
#include <string>
#include <vector>

#include "sparsesim/bitstring.hpp"

namespace sparsesim {

enum class GateKind { Not, Cnot, Toffoli };

struct ReversibleGate {
    GateKind kind = GateKind::Not;
    std::array<int, 2> controls{-1, -1};
    int target = 0;

    static ReversibleGate not_gate(int target) { return {GateKind::Not, {-1, -1}, target}; }
    static ReversibleGate cnot(int control, int target) { return {GateKind::Cnot, {control, -1}, target}; }
    static ReversibleGate toffoli(int c1, int c2, int target) { return {GateKind::Toffoli, {c1, c2}, target}; }

    int num_controls() const {
        switch (kind) {
            case GateKind::Not:
                return 0;
            case GateKind::Cnot:
                return 1;
            case GateKind::Toffoli:
                return 2;
        }
        return 0;
    }

    std::uint64_t apply(std::uint64_t x) const {
        bool fire = true;
        for (int c = 0; c < num_controls(); ++c) {
            fire = fire && ((x >> controls[static_cast<std::size_t>(c)]) & 1);
        }
        return fire ? x ^ (std::uint64_t{1} << target) : x;
    }

    friend bool operator==(const ReversibleGate&, const ReversibleGate&) = default;
};

/// A sequence of NOT / CNOT / TOFFOLI gates acting as a permutation of basis strings.
/// Each gate is an involution, so the inverse runs the gates in reverse order.
class ReversibleCircuit {
   public:
    ReversibleCircuit() = default;
    explicit ReversibleCircuit(std::vector<ReversibleGate> gates) : gates_(std::move(gates)) {}

    void push_back(const ReversibleGate& g) { gates_.push_back(g); }
    const std::vector<ReversibleGate>& gates() const { return gates_; }
    bool empty() const { return gates_.empty(); }

    std::uint64_t forward(std::uint64_t x) const {
        for (const auto& g : gates_) {
            x = g.apply(x);
        }
        return x;
    }

    std::uint64_t inverse(std::uint64_t x) const {
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            x = it->apply(x);
        }
        return x;
    }

    /// Throws InputError naming the first gate whose qubits are out of range or repeated.
    void validate(int n) const {
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            const auto& g = gates_[i];
            std::vector<int> qubits;
            for (int c = 0; c < g.num_controls(); ++c) {
                qubits.push_back(g.controls[static_cast<std::size_t>(c)]);
            }
            qubits.push_back(g.target);
            check_subset(qubits, n, "gate " + std::to_string(i));
        }
    }

    friend bool operator==(const ReversibleCircuit&, const ReversibleCircuit&) = default;

   private:
    std::vector<ReversibleGate> gates_;
};

}  // namespace sparsesim
