// Copyright 2026 The qtwin Authors
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

#include "qtwin/circ.h"

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "qtwin/error.h"
#include "qtwin/rng.h"

namespace qtwin {

namespace {

struct GateInfo {
    int arity;
    int params;
};

const std::map<std::string, GateInfo, std::less<>> &gate_table() {
    static const std::map<std::string, GateInfo, std::less<>> table{
        {"id", {1, 0}},  {"x", {1, 0}},   {"y", {1, 0}},   {"z", {1, 0}},    {"h", {1, 0}},
        {"s", {1, 0}},   {"sdg", {1, 0}}, {"t", {1, 0}},   {"tdg", {1, 0}},  {"sx", {1, 0}},
        {"rx", {1, 1}},  {"ry", {1, 1}},  {"rz", {1, 1}},  {"p", {1, 1}},    {"u", {1, 3}},
        {"cx", {2, 0}},  {"cz", {2, 0}},  {"swap", {2, 0}}, {"ecr", {2, 0}},
    };
    return table;
}

const GateInfo &info(std::string_view label) {
    auto it = gate_table().find(label);
    if (it == gate_table().end()) {
        throw Error(ErrorCode::UnknownGate, "unknown gate '" + std::string(label) + "'");
    }
    return it->second;
}

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

bool is_known_gate(std::string_view label) {
    return gate_table().count(label) > 0;
}

int gate_arity(std::string_view label) {
    return info(label).arity;
}

int gate_param_count(std::string_view label) {
    return info(label).params;
}

Matrix gate_matrix(std::string_view label, std::span<const double> params) {
    const auto &gi = info(label);
    if (static_cast<int>(params.size()) != gi.params) {
        throw Error(
            ErrorCode::UnknownGate,
            "gate '" + std::string(label) + "' takes " + std::to_string(gi.params) + " parameters, got " +
                std::to_string(params.size()));
    }
    using std::numbers::sqrt2;
    const cplx i(0, 1);
    if (label == "id") {
        return Matrix::Identity(2, 2);
    }
    if (label == "x") {
        return mat2(0, 1, 1, 0);
    }
    if (label == "y") {
        return mat2(0, -i, i, 0);
    }
    if (label == "z") {
        return mat2(1, 0, 0, -1);
    }
    if (label == "h") {
        return mat2(1 / sqrt2, 1 / sqrt2, 1 / sqrt2, -1 / sqrt2);
    }
    if (label == "s") {
        return mat2(1, 0, 0, i);
    }
    if (label == "sdg") {
        return mat2(1, 0, 0, -i);
    }
    if (label == "t") {
        return mat2(1, 0, 0, std::exp(i * (std::numbers::pi / 4)));
    }
    if (label == "tdg") {
        return mat2(1, 0, 0, std::exp(-i * (std::numbers::pi / 4)));
    }
    if (label == "sx") {
        return mat2(cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5));
    }
    if (label == "rx") {
        double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
        return mat2(c, -i * s, -i * s, c);
    }
    if (label == "ry") {
        double c = std::cos(params[0] / 2), s = std::sin(params[0] / 2);
        return mat2(c, -s, s, c);
    }
    if (label == "rz") {
        return mat2(std::exp(-i * (params[0] / 2)), 0, 0, std::exp(i * (params[0] / 2)));
    }
    if (label == "p") {
        return mat2(1, 0, 0, std::exp(i * params[0]));
    }
    if (label == "u") {
        double theta = params[0], phi = params[1], lam = params[2];
        double c = std::cos(theta / 2), s = std::sin(theta / 2);
        return mat2(c, -std::exp(i * lam) * s, std::exp(i * phi) * s, std::exp(i * (phi + lam)) * c);
    }
    Matrix m = Matrix::Zero(4, 4);
    if (label == "cx") {
        // control on local qubit 0, target on local qubit 1
        m(0, 0) = m(2, 2) = 1;
        m(1, 3) = m(3, 1) = 1;
    } else if (label == "cz") {
        m(0, 0) = m(1, 1) = m(2, 2) = 1;
        m(3, 3) = -1;
    } else if (label == "swap") {
        m(0, 0) = m(3, 3) = 1;
        m(1, 2) = m(2, 1) = 1;
    } else {  // ecr
        Matrix ix = kron(gate_matrix("id"), gate_matrix("x"));
        Matrix xy = kron(gate_matrix("x"), gate_matrix("y"));
        m = (ix - xy) / sqrt2;
    }
    return m;
}

Matrix gate_matrix(const GateOp &op) {
    return gate_matrix(op.label, op.params);
}

void Circuit::validate() const {
    for (const auto &op : ops) {
        const auto &gi = info(op.label);
        if (static_cast<int>(op.qubits.size()) != gi.arity || static_cast<int>(op.params.size()) != gi.params) {
            throw Error(ErrorCode::InconsistentInputs, "gate '" + op.label + "' has wrong operand or parameter count");
        }
        for (int q : op.qubits) {
            if (q < 0 || static_cast<size_t>(q) >= num_qubits) {
                throw Error(ErrorCode::InconsistentInputs, "gate '" + op.label + "' acts on qubit " + std::to_string(q) + " outside the circuit");
            }
        }
        if (op.qubits.size() == 2 && op.qubits[0] == op.qubits[1]) {
            throw Error(ErrorCode::InconsistentInputs, "gate '" + op.label + "' repeats a qubit");
        }
    }
}

Circuit random_circuit(size_t num_qubits, size_t depth, uint64_t seed) {
    static constexpr std::array<const char *, 4> kTwo{"cx", "cz", "swap", "ecr"};
    static constexpr std::array<const char *, 10> kOne{"h", "x", "y", "z", "s", "t", "sx", "rx", "ry", "rz"};
    Rng rng(seed);
    Circuit c;
    c.num_qubits = num_qubits;
    c.measured = true;
    std::vector<int> order(num_qubits);
    for (size_t layer = 0; layer < depth; layer++) {
        for (size_t q = 0; q < num_qubits; q++) {
            order[q] = static_cast<int>(q);
        }
        for (size_t q = num_qubits; q > 1; q--) {
            std::swap(order[q - 1], order[uniform_index(rng, q)]);
        }
        size_t k = 0;
        while (k < num_qubits) {
            if (k + 1 < num_qubits && uniform_index(rng, 2) == 1) {
                c.ops.push_back({kTwo[uniform_index(rng, kTwo.size())], {order[k], order[k + 1]}, {}});
                k += 2;
            } else {
                GateOp op{kOne[uniform_index(rng, kOne.size())], {order[k]}, {}};
                if (gate_param_count(op.label) == 1) {
                    op.params.push_back(2 * std::numbers::pi * uniform01(rng));
                }
                c.ops.push_back(std::move(op));
                k += 1;
            }
        }
    }
    return c;
}

Matrix circuit_unitary(const Circuit &circuit) {
    if (circuit.num_qubits > 10) {
        throw Error(ErrorCode::TooLarge, "unitary oracle limited to 10 qubits");
    }
    circuit.validate();
    const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &op : circuit.ops) {
        Matrix g = gate_matrix(op);
        for (Eigen::Index col = 0; col < dim; col++) {
            apply_local(std::span<cplx>(u.col(col).data(), dim), op.qubits, g);
        }
    }
    return u;
}

nlohmann::json circuit_to_json(const Circuit &circuit) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &op : circuit.ops) {
        ops.push_back({{"label", op.label}, {"qubits", op.qubits}, {"params", op.params}});
    }
    return {{"num_qubits", circuit.num_qubits}, {"ops", ops}, {"measured", circuit.measured}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
    try {
        Circuit c;
        c.num_qubits = j.at("num_qubits").get<size_t>();
        c.measured = j.value("measured", false);
        for (const auto &op : j.at("ops")) {
            c.ops.push_back({op.at("label").get<std::string>(), op.at("qubits").get<std::vector<int>>(),
                             op.value("params", std::vector<double>{})});
        }
        c.validate();
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::SchemaMismatch, std::string("circuit JSON: ") + e.what());
    }
}

}  // namespace qtwin
