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

// JSON circuit files.
//
//   {
//     "n": 4,
//     "input": "0000",                 // qubit 0 first, least significant
//     "u1": {"type": "qft-then-reversible", "qft_targets": [1, 2, 3], "inverse": false,
//            "gates": [{"gate": "cnot", "controls": [0], "target": 1}]},
//     "u2": {"type": "qft", "targets": [0, 1, 2, 3], "inverse": false},
//     "measure": [0, 1, 2, 3]
//   }
//
// Other u1 types: "iqp" {gates: [{theta, qubits}]}, "function" {builtin, mask},
// "product" {unitaries}, "explicit" {amplitudes: [{x, re, im}]}.
// u2 "product" {unitaries}. A unitary is a name (I, H, X, Y, Z, S, T) or a row-major 2x2
// matrix of [re, im] pairs. theta may be a number or a multiple of pi such as "pi/4".

#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsesim/circuit.hpp"

namespace sparsesim {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& msg) {
    throw InputError(path + ": " + msg);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        field_error(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(path.empty() ? key : path + "." + key, "missing field");
    }
    return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline int read_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        field_error(path, "expected an integer");
    }
    return v.get<int>();
}

inline std::vector<int> read_int_list(const Json& v, const std::string& path) {
    if (!v.is_array()) {
        field_error(path, "expected a list of integers");
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_int(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline bool read_bool(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_boolean()) {
        field_error(join(path, key), "expected true or false");
    }
    return it->get<bool>();
}

inline double read_number(const Json& v, const std::string& path) {
    if (!v.is_number()) {
        field_error(path, "expected a number");
    }
    return v.get<double>();
}

/// A number, or "[-][c]pi[/d]".
inline double read_angle(const Json& v, const std::string& path) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (!v.is_string()) {
        field_error(path, "expected a number or a multiple of pi");
    }
    std::string s;
    for (char c : v.get<std::string>()) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s += c;
        }
    }
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        field_error(path, "cannot read angle '" + v.get<std::string>() + "'");
    }
    try {
        std::string head = s.substr(0, pos);
        double coeff = 1.0;
        if (head == "-") {
            coeff = -1.0;
        } else if (!head.empty() && head != "+") {
            if (head.back() == '*') {
                head.pop_back();
            }
            std::size_t used = 0;
            coeff = std::stod(head, &used);
            if (used != head.size()) {
                throw std::invalid_argument("trailing");
            }
        }
        std::string tail = s.substr(pos + 2);
        double den = 1.0;
        if (!tail.empty()) {
            if (tail[0] != '/') {
                throw std::invalid_argument("tail");
            }
            std::size_t used = 0;
            den = std::stod(tail.substr(1), &used);
            if (used != tail.size() - 1 || den == 0.0) {
                throw std::invalid_argument("den");
            }
        }
        return coeff * std::numbers::pi / den;
    } catch (const std::invalid_argument&) {
        field_error(path, "cannot read angle '" + v.get<std::string>() + "'");
    } catch (const std::out_of_range&) {
        field_error(path, "angle out of range");
    }
}

inline Mat2 read_unitary(const Json& v, const std::string& path) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        if (name == "I") return gate::identity();
        if (name == "H") return gate::hadamard();
        if (name == "X") return gate::pauli_x();
        if (name == "Y") return gate::pauli_y();
        if (name == "Z") return gate::pauli_z();
        if (name == "S") return gate::phase_s();
        if (name == "T") return gate::phase_t();
        field_error(path, "unknown gate name '" + name + "'");
    }
    if (!v.is_array() || v.size() != 2) {
        field_error(path, "expected a gate name or a 2x2 matrix");
    }
    Mat2 m{};
    for (std::size_t r = 0; r < 2; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!v[r].is_array() || v[r].size() != 2) {
            field_error(rp, "expected a row of 2 entries");
        }
        for (std::size_t c = 0; c < 2; ++c) {
            const std::string cp = rp + "[" + std::to_string(c) + "]";
            const Json& e = v[r][c];
            if (e.is_number()) {
                m[r][c] = {e.get<double>(), 0.0};
            } else if (e.is_array() && e.size() == 2) {
                m[r][c] = {read_number(e[0], cp + "[0]"), read_number(e[1], cp + "[1]")};
            } else {
                field_error(cp, "expected [re, im]");
            }
        }
    }
    return m;
}

inline std::vector<Mat2> read_unitaries(const Json& v, const std::string& path) {
    if (!v.is_array()) {
        field_error(path, "expected a list of unitaries");
    }
    std::vector<Mat2> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_unitary(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline BitString read_bits(const Json& v, const std::string& path) {
    if (!v.is_string()) {
        field_error(path, "expected a bit string");
    }
    try {
        return BitString::parse(v.get<std::string>());
    } catch (const InputError& e) {
        field_error(path, e.what());
    }
}

inline ReversibleGate read_reversible(const Json& g, const std::string& path) {
    const std::string name = require(g, "gate", path).is_string() ? g["gate"].get<std::string>() : "";
    const int target = read_int(require(g, "target", path), path + ".target");
    std::vector<int> controls;
    if (g.contains("controls")) {
        controls = read_int_list(g["controls"], path + ".controls");
    }
    auto expect = [&](std::size_t count) {
        if (controls.size() != count) {
            field_error(path + ".controls", "gate '" + name + "' takes " + std::to_string(count) + " controls");
        }
    };
    if (name == "not") {
        expect(0);
        return ReversibleGate::not_gate(target);
    }
    if (name == "cnot") {
        expect(1);
        return ReversibleGate::cnot(controls[0], target);
    }
    if (name == "toffoli") {
        expect(2);
        return ReversibleGate::toffoli(controls[0], controls[1], target);
    }
    field_error(path + ".gate", "expected \"not\", \"cnot\" or \"toffoli\"");
}

inline U1Recipe read_u1(const Json& u, const std::string& path) {
    const Json& type = require(u, "type", path);
    const std::string t = type.is_string() ? type.get<std::string>() : "";
    if (t == "qft-then-reversible") {
        QftReversibleRecipe r;
        r.qft_targets = read_int_list(require(u, "qft_targets", path), path + ".qft_targets");
        r.inverse = read_bool(u, "inverse", path, false);
        if (u.contains("gates")) {
            const Json& gates = u["gates"];
            if (!gates.is_array()) {
                field_error(path + ".gates", "expected a list of gates");
            }
            for (std::size_t i = 0; i < gates.size(); ++i) {
                r.gates.push_back(read_reversible(gates[i], path + ".gates[" + std::to_string(i) + "]"));
            }
        }
        return r;
    }
    if (t == "iqp") {
        IqpRecipe r;
        const Json& gates = require(u, "gates", path);
        if (!gates.is_array()) {
            field_error(path + ".gates", "expected a list of gates");
        }
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const std::string gp = path + ".gates[" + std::to_string(i) + "]";
            IqpGate g;
            g.theta = read_angle(require(gates[i], "theta", gp), gp + ".theta");
            g.qubits = read_int_list(require(gates[i], "qubits", gp), gp + ".qubits");
            r.gates.push_back(std::move(g));
        }
        return r;
    }
    if (t == "function") {
        FunctionRecipe r;
        const Json& b = require(u, "builtin", path);
        if (!b.is_string()) {
            field_error(path + ".builtin", "expected a function name");
        }
        r.builtin = b.get<std::string>();
        if (u.contains("mask")) {
            r.mask = read_int_list(u["mask"], path + ".mask");
        }
        return r;
    }
    if (t == "product") {
        return ProductRecipe{read_unitaries(require(u, "unitaries", path), path + ".unitaries")};
    }
    if (t == "explicit") {
        ExplicitRecipe r;
        const Json& amps = require(u, "amplitudes", path);
        if (!amps.is_array()) {
            field_error(path + ".amplitudes", "expected a list of {x, re, im}");
        }
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const std::string ap = path + ".amplitudes[" + std::to_string(i) + "]";
            const BitString x = read_bits(require(amps[i], "x", ap), ap + ".x");
            const double re = amps[i].contains("re") ? read_number(amps[i]["re"], ap + ".re") : 0.0;
            const double im = amps[i].contains("im") ? read_number(amps[i]["im"], ap + ".im") : 0.0;
            r.amplitudes.emplace_back(x, Amplitude{re, im});
        }
        return r;
    }
    field_error(path + ".type",
                "unsupported first block '" + t +
                    "' (expected qft-then-reversible, iqp, function, product or explicit)");
}

inline U2Block read_u2(const Json& u, const std::string& path) {
    const Json& type = require(u, "type", path);
    const std::string t = type.is_string() ? type.get<std::string>() : "";
    if (t == "qft") {
        return QftBlock{read_int_list(require(u, "targets", path), path + ".targets"), read_bool(u, "inverse", path, false)};
    }
    if (t == "product") {
        return ProductBlock{read_unitaries(require(u, "unitaries", path), path + ".unitaries")};
    }
    field_error(path + ".type", "unsupported second block '" + t + "' (expected qft or product)");
}

inline Json write_unitary(const Mat2& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& e : row) {
            r.push_back(Json::array({e.real(), e.imag()}));
        }
        rows.push_back(r);
    }
    return rows;
}

inline Json write_unitaries(const std::vector<Mat2>& us) {
    Json out = Json::array();
    for (const auto& u : us) {
        out.push_back(write_unitary(u));
    }
    return out;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size())), '\n'));
}

}  // namespace detail

/// Builds and validates a circuit from its JSON document; errors name the offending field.
inline CircuitSpec circuit_from_json(const Json& doc) {
    CircuitSpec spec;
    spec.n = detail::read_int(detail::require(doc, "n", ""), "n");
    spec.input = detail::read_bits(detail::require(doc, "input", ""), "input");
    spec.u1 = detail::read_u1(detail::require(doc, "u1", ""), "u1");
    spec.u2 = detail::read_u2(detail::require(doc, "u2", ""), "u2");
    spec.measure = detail::read_int_list(detail::require(doc, "measure", ""), "measure");
    spec.validate();
    return spec;
}

inline Json circuit_to_json(const CircuitSpec& spec) {
    Json doc;
    doc["n"] = spec.n;
    doc["input"] = spec.input.str();
    struct U1Writer {
        Json operator()(const QftReversibleRecipe& r) const {
            Json gates = Json::array();
            for (const auto& g : r.gates.gates()) {
                Json j;
                j["gate"] = g.kind == GateKind::Not ? "not" : g.kind == GateKind::Cnot ? "cnot" : "toffoli";
                Json controls = Json::array();
                for (int c = 0; c < g.num_controls(); ++c) {
                    controls.push_back(g.controls[static_cast<std::size_t>(c)]);
                }
                j["controls"] = controls;
                j["target"] = g.target;
                gates.push_back(j);
            }
            return {{"type", "qft-then-reversible"}, {"qft_targets", r.qft_targets}, {"inverse", r.inverse},
                    {"gates", gates}};
        }
        Json operator()(const IqpRecipe& r) const {
            Json gates = Json::array();
            for (const auto& g : r.gates) {
                gates.push_back({{"theta", g.theta}, {"qubits", g.qubits}});
            }
            return {{"type", "iqp"}, {"gates", gates}};
        }
        Json operator()(const FunctionRecipe& r) const {
            return {{"type", "function"}, {"builtin", r.builtin}, {"mask", r.mask}};
        }
        Json operator()(const ProductRecipe& r) const {
            return {{"type", "product"}, {"unitaries", detail::write_unitaries(r.unitaries)}};
        }
        Json operator()(const ExplicitRecipe& r) const {
            Json amps = Json::array();
            for (const auto& [x, a] : r.amplitudes) {
                amps.push_back({{"x", x.str()}, {"re", a.real()}, {"im", a.imag()}});
            }
            return {{"type", "explicit"}, {"amplitudes", amps}};
        }
    };
    doc["u1"] = std::visit(U1Writer{}, spec.u1);
    if (const auto* q = std::get_if<QftBlock>(&spec.u2)) {
        doc["u2"] = {{"type", "qft"}, {"targets", q->targets}, {"inverse", q->inverse}};
    } else {
        doc["u2"] = {{"type", "product"}, {"unitaries", detail::write_unitaries(std::get<ProductBlock>(spec.u2).unitaries)}};
    }
    doc["measure"] = spec.measure;
    return doc;
}

/// Parses circuit text; `source` prefixes error messages.
inline CircuitSpec parse_circuit_text(const std::string& text, const std::string& source = "circuit") {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(source + ":" + std::to_string(detail::line_of(text, e.byte)) + ": malformed JSON (" +
                         e.what() + ")");
    }
    try {
        return circuit_from_json(doc);
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    }
}

inline CircuitSpec parse_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_circuit_text(buf.str(), path);
}

}  // namespace sparsesim
