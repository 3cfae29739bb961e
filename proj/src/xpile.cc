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

#include "qtwin/xpile.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qtwin/error.h"
#include "qtwin/twin.h"

namespace qtwin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-12;

double wrap_angle(double a) {
    a = std::remainder(a, 2 * kPi);
    if (a <= -kPi) {
        a += 2 * kPi;
    }
    return a;
}

bool is_zero_angle(double a) {
    return std::abs(wrap_angle(a)) < kAngleTol;
}

bool in_basis(const std::vector<std::string> &basis, const std::string &label) {
    return std::find(basis.begin(), basis.end(), label) != basis.end();
}

GateOp rz(int q, double angle) {
    return {"rz", {q}, {wrap_angle(angle)}};
}

class Translator {
   public:
    Translator(const std::vector<std::string> &basis, const CouplingMap &map) : basis_(basis), map_(map) {
        for (const char *g : {"ecr", "cz", "cx"}) {
            if (in_basis(basis, g)) {
                native_ = g;
                break;
            }
        }
        can_synthesize_ = in_basis(basis, "rz") && in_basis(basis, "sx");
    }

    Circuit run(const Circuit &in) {
        out_ = Circuit{in.num_qubits, {}, in.measured};
        for (const auto &op : in.ops) {
            lower(op);
        }
        return std::move(out_);
    }

   private:
    void emit(GateOp op) {
        out_.ops.push_back(std::move(op));
    }

    void lower(const GateOp &op) {
        if (op.qubits.size() == 1) {
            lower_1q(op);
        } else {
            lower_2q(op);
        }
    }

    void lower_1q(const GateOp &op) {
        if (in_basis(basis_, op.label)) {
            emit(op);
            return;
        }
        if (op.label == "id") {
            return;
        }
        if (!can_synthesize_) {
            throw Error(ErrorCode::NoDecomposition, "basis lacks rz/sx needed to express '" + op.label + "'");
        }
        for (auto &g : synthesize_1q(gate_matrix(op), op.qubits[0])) {
            emit(std::move(g));
        }
    }

    void one(const char *label, int q, std::vector<double> params = {}) {
        lower_1q({label, {q}, std::move(params)});
    }

    void require_native() {
        if (native_.empty()) {
            throw Error(ErrorCode::NoDecomposition, "basis has no two-qubit gate among ecr, cz, cx");
        }
    }

    void require_link(int a, int b) {
        if (!map_.connected(a, b)) {
            throw Error(
                ErrorCode::Unroutable, "qubits " + std::to_string(a) + " and " + std::to_string(b) + " are not coupled");
        }
    }

    // cx(a,b) = rz(pi/2)_a . ecr(a,b) . (x_a (x) sx_b) up to global phase.
    void cx_via_ecr(int a, int b) {
        one("x", a);
        one("sx", b);
        emit({"ecr", {a, b}, {}});
        one("rz", a, {kPi / 2});
    }

    void cx(int a, int b) {
        require_native();
        require_link(a, b);
        const bool forward = map_.has_directed_edge(a, b);
        if (native_ == "cz") {
            one("h", b);
            emit({"cz", forward ? std::vector<int>{a, b} : std::vector<int>{b, a}, {}});
            one("h", b);
            return;
        }
        if (!forward) {
            // Hadamards on both qubits exchange control and target.
            one("h", a);
            one("h", b);
            cx_forward(b, a);
            one("h", a);
            one("h", b);
            return;
        }
        cx_forward(a, b);
    }

    void cx_forward(int a, int b) {
        if (native_ == "cx") {
            emit({"cx", {a, b}, {}});
        } else {
            cx_via_ecr(a, b);
        }
    }

    void lower_2q(const GateOp &op) {
        const int a = op.qubits[0];
        const int b = op.qubits[1];
        const bool native = op.label == native_;
        if (op.label == "cx") {
            if (native && map_.has_directed_edge(a, b)) {
                emit(op);
            } else {
                cx(a, b);
            }
        } else if (op.label == "cz") {
            if (native) {
                require_link(a, b);
                emit({"cz", map_.has_directed_edge(a, b) ? op.qubits : std::vector<int>{b, a}, {}});
            } else {
                one("h", b);
                cx(a, b);
                one("h", b);
            }
        } else if (op.label == "swap") {
            cx(a, b);
            cx(b, a);
            cx(a, b);
        } else if (op.label == "ecr") {
            if (native && map_.has_directed_edge(a, b)) {
                emit(op);
                return;
            }
            // ecr(a,b) = rz(-pi/2)_a . cx(a,b) . (x_a (x) sxdg_b) up to global phase.
            one("x", a);
            one("rx", b, {-kPi / 2});
            cx(a, b);
            one("rz", a, {-kPi / 2});
        } else {
            throw Error(ErrorCode::UnknownGate, "cannot translate gate '" + op.label + "'");
        }
    }

    const std::vector<std::string> &basis_;
    const CouplingMap &map_;
    std::string native_;
    bool can_synthesize_ = false;
    Circuit out_;
};

bool is_involutory(const std::string &label) {
    return label == "x" || label == "y" || label == "z" || label == "h" || label == "ecr" || label == "cx" ||
           label == "cz" || label == "swap";
}

bool symmetric_2q(const std::string &label) {
    return label == "cz" || label == "swap";
}

// Removes adjacent identical involutory gates on the same wires; cascades.
Circuit cancel_pairs(const Circuit &in) {
    std::vector<GateOp> ops;
    std::vector<bool> alive;
    std::vector<std::vector<size_t>> stack(in.num_qubits);
    for (const auto &op : in.ops) {
        if (is_involutory(op.label)) {
            const auto &s0 = stack[op.qubits[0]];
            if (!s0.empty()) {
                size_t j = s0.back();
                const GateOp &prev = ops[j];
                bool same_wires = prev.qubits == op.qubits;
                if (!same_wires && symmetric_2q(op.label) && op.qubits.size() == 2) {
                    same_wires = prev.qubits == std::vector<int>{op.qubits[1], op.qubits[0]};
                }
                bool adjacent = true;
                for (int q : op.qubits) {
                    adjacent = adjacent && !stack[q].empty() && stack[q].back() == j;
                }
                if (prev.label == op.label && same_wires && adjacent) {
                    alive[j] = false;
                    for (int q : op.qubits) {
                        stack[q].pop_back();
                    }
                    continue;
                }
            }
        }
        ops.push_back(op);
        alive.push_back(true);
        for (int q : op.qubits) {
            stack[q].push_back(ops.size() - 1);
        }
    }
    Circuit out{in.num_qubits, {}, in.measured};
    for (size_t i = 0; i < ops.size(); i++) {
        if (alive[i]) {
            out.ops.push_back(std::move(ops[i]));
        }
    }
    return out;
}

// Accumulates rz angles per wire and emits them lazily. With `commute`, pending
// rotations travel through cz, the control of cx and (negated) the first qubit of ecr.
Circuit merge_rz(const Circuit &in, bool commute) {
    Circuit out{in.num_qubits, {}, in.measured};
    std::vector<std::optional<double>> pending(in.num_qubits);
    auto flush = [&](int q) {
        if (pending[q]) {
            if (!is_zero_angle(*pending[q])) {
                out.ops.push_back(rz(q, *pending[q]));
            }
            pending[q].reset();
        }
    };
    for (const auto &op : in.ops) {
        if (op.label == "rz") {
            int q = op.qubits[0];
            pending[q] = pending[q].value_or(0.0) + op.params[0];
            continue;
        }
        if (commute && op.qubits.size() == 2) {
            int a = op.qubits[0];
            int b = op.qubits[1];
            if (op.label == "cz") {
                out.ops.push_back(op);
                continue;
            }
            if (op.label == "cx") {
                flush(b);
                out.ops.push_back(op);
                continue;
            }
            if (op.label == "ecr") {
                flush(b);
                if (pending[a]) {
                    pending[a] = -*pending[a];
                }
                out.ops.push_back(op);
                continue;
            }
        }
        for (int q : op.qubits) {
            flush(q);
        }
        out.ops.push_back(op);
    }
    for (size_t q = 0; q < in.num_qubits; q++) {
        flush(static_cast<int>(q));
    }
    return out;
}

Circuit level1(Circuit c) {
    while (true) {
        Circuit next = cancel_pairs(merge_rz(c, false));
        if (next.ops.size() == c.ops.size()) {
            return next;
        }
        c = std::move(next);
    }
}

Circuit resynthesize_runs(const Circuit &in) {
    const size_t n = in.ops.size();
    std::vector<std::optional<std::vector<GateOp>>> replacement(n);
    std::vector<std::vector<size_t>> run(in.num_qubits);
    auto close = [&](int q) {
        auto &r = run[q];
        if (r.size() >= 2) {
            Matrix u = Matrix::Identity(2, 2);
            for (size_t idx : r) {
                u = gate_matrix(in.ops[idx]) * u;
            }
            auto synth = synthesize_1q(u, q);
            if (synth.size() < r.size()) {
                for (size_t idx : r) {
                    replacement[idx] = std::vector<GateOp>{};
                }
                replacement[r.back()] = std::move(synth);
            }
        }
        r.clear();
    };
    for (size_t i = 0; i < n; i++) {
        const auto &op = in.ops[i];
        if (op.qubits.size() == 1) {
            run[op.qubits[0]].push_back(i);
        } else {
            for (int q : op.qubits) {
                close(q);
            }
        }
    }
    for (size_t q = 0; q < in.num_qubits; q++) {
        close(static_cast<int>(q));
    }
    Circuit out{in.num_qubits, {}, in.measured};
    for (size_t i = 0; i < n; i++) {
        if (replacement[i]) {
            for (auto &g : *replacement[i]) {
                out.ops.push_back(std::move(g));
            }
        } else {
            out.ops.push_back(in.ops[i]);
        }
    }
    return out;
}

// Resynthesis emits rz and sx, so it only runs on circuits already written in that basis.
bool resynthesizable(const Circuit &c) {
    bool has_rz = false;
    bool has_sx = false;
    for (const auto &op : c.ops) {
        if (op.qubits.size() != 1) {
            continue;
        }
        if (op.label != "rz" && op.label != "sx" && op.label != "x" && op.label != "rx" && op.label != "id") {
            return false;
        }
        has_rz = has_rz || op.label == "rz";
        has_sx = has_sx || op.label == "sx";
    }
    return has_rz && has_sx;
}

}  // namespace

TranspiledCircuit TranspiledCircuit::trivial(const Circuit &circuit) {
    TranspiledCircuit tc;
    tc.circuit = circuit;
    for (size_t v = 0; v < circuit.num_qubits; v++) {
        tc.layout.push_back(static_cast<int>(v));
    }
    tc.final_layout = tc.layout;
    return tc;
}

Circuit TranspiledCircuit::compact() const {
    std::map<int, int> index;
    for (size_t v = 0; v < layout.size(); v++) {
        index[layout[v]] = static_cast<int>(v);
    }
    Circuit c{layout.size(), {}, circuit.measured};
    for (const auto &op : circuit.ops) {
        GateOp g = op;
        for (auto &q : g.qubits) {
            auto it = index.find(q);
            if (it == index.end()) {
                throw Error(ErrorCode::InconsistentInputs, "op '" + op.label + "' touches physical qubit " + std::to_string(q) + " outside the layout");
            }
            q = it->second;
        }
        c.ops.push_back(std::move(g));
    }
    return c;
}

std::vector<GateOp> synthesize_1q(const Matrix &u, int qubit) {
    // ZYZ angles of u / sqrt(det u): u ~ rz(phi) ry(theta) rz(lam).
    cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    Matrix v = u / std::sqrt(det);
    double theta = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
    double sum_half = std::arg(v(1, 1));
    double diff_half = std::arg(v(1, 0));
    double phi = sum_half + diff_half;
    double lam = sum_half - diff_half;

    std::vector<GateOp> out;
    auto add_rz = [&](double a) {
        if (!is_zero_angle(a)) {
            out.push_back(rz(qubit, a));
        }
    };
    if (std::abs(theta) < kAngleTol) {
        add_rz(phi + lam);
    } else if (std::abs(theta - kPi / 2) < kAngleTol) {
        add_rz(lam - kPi / 2);
        out.push_back({"sx", {qubit}, {}});
        add_rz(phi + kPi / 2);
    } else {
        add_rz(lam);
        out.push_back({"sx", {qubit}, {}});
        add_rz(theta + kPi);
        out.push_back({"sx", {qubit}, {}});
        add_rz(phi + kPi);
    }
    return out;
}

std::vector<int> choose_layout(size_t count, const CouplingMap &map, const std::set<int> &allowed) {
    if (count == 0) {
        return {};
    }
    for (int start : allowed) {
        std::set<int> chosen{start};
        while (chosen.size() < count) {
            std::optional<int> next;
            for (int q : chosen) {
                for (int nb : map.neighbors(q)) {
                    if (allowed.count(nb) && !chosen.count(nb) && (!next || nb < *next)) {
                        next = nb;
                    }
                }
            }
            if (!next) {
                break;
            }
            chosen.insert(*next);
        }
        if (chosen.size() == count) {
            return std::vector<int>(chosen.begin(), chosen.end());
        }
    }
    throw Error(
        ErrorCode::Unroutable, "no connected set of " + std::to_string(count) + " usable qubits in the coupling map");
}

RouteResult route(const Circuit &placed, const CouplingMap &map, const std::vector<int> &active, uint64_t) {
    const std::set<int> active_set(active.begin(), active.end());
    const CouplingMap sub = map.restricted_to(active_set);
    std::vector<int> occupant(placed.num_qubits);
    std::vector<int> position(placed.num_qubits);
    for (size_t q = 0; q < placed.num_qubits; q++) {
        occupant[q] = position[q] = static_cast<int>(q);
    }
    RouteResult result{Circuit{placed.num_qubits, {}, placed.measured}, {}};
    auto do_swap = [&](int p, int r) {
        result.circuit.ops.push_back({"swap", {p, r}, {}});
        std::swap(occupant[p], occupant[r]);
        position[occupant[p]] = p;
        position[occupant[r]] = r;
    };
    for (const auto &op : placed.ops) {
        GateOp g = op;
        if (op.qubits.size() == 2) {
            int p0 = position[op.qubits[0]];
            int p1 = position[op.qubits[1]];
            if (!sub.connected(p0, p1)) {
                std::vector<int> path;
                try {
                    path = shortest_path(sub, std::min(p0, p1), std::max(p0, p1));
                } catch (const Error &) {
                    throw Error(
                        ErrorCode::Unroutable,
                        "no path between physical qubits " + std::to_string(p0) + " and " + std::to_string(p1));
                }
                for (size_t i = 0; i + 2 < path.size(); i++) {
                    do_swap(path[i], path[i + 1]);
                }
            }
        }
        for (auto &q : g.qubits) {
            q = position[q];
        }
        result.circuit.ops.push_back(std::move(g));
    }
    for (size_t q = 0; q < placed.num_qubits; q++) {
        if (active_set.count(static_cast<int>(q))) {
            result.final_position[static_cast<int>(q)] = position[q];
        }
    }
    return result;
}

Circuit translate(const Circuit &routed, const std::vector<std::string> &basis, const CouplingMap &map) {
    routed.validate();
    return Translator(basis, map).run(routed);
}

Circuit optimize(const Circuit &translated, int level, uint64_t) {
    if (level <= 0) {
        return translated;
    }
    Circuit l1 = level1(translated);
    if (level == 1) {
        return l1;
    }
    Circuit l2 = level1(merge_rz(l1, true));
    if (l2.ops.size() > l1.ops.size()) {
        l2 = l1;
    }
    if (level == 2) {
        return l2;
    }
    Circuit l3 = l2;
    if (resynthesizable(l2)) {
        l3 = level1(merge_rz(level1(resynthesize_runs(l2)), true));
        if (l3.ops.size() > l2.ops.size()) {
            l3 = l2;
        }
    }
    return l3;
}

TranspiledCircuit transpile(
    const Circuit &circuit, const CouplingMap &map, const std::vector<std::string> &basis, int level, uint64_t seed,
    const std::set<int> &allowed) {
    circuit.validate();
    if (level < 0 || level > 3) {
        throw Error(ErrorCode::Usage, "optimization level must be 0..3");
    }
    std::set<int> usable = allowed;
    if (usable.empty()) {
        for (size_t q = 0; q < map.num_qubits(); q++) {
            usable.insert(static_cast<int>(q));
        }
    }
    if (circuit.num_qubits > usable.size()) {
        throw Error(ErrorCode::Unroutable, "circuit needs more qubits than the device offers");
    }

    TranspiledCircuit tc;
    tc.level = level;
    tc.layout = choose_layout(circuit.num_qubits, map, usable);

    Circuit placed{map.num_qubits(), {}, circuit.measured};
    for (const auto &op : circuit.ops) {
        GateOp g = op;
        for (auto &q : g.qubits) {
            q = tc.layout[q];
        }
        placed.ops.push_back(std::move(g));
    }
    RouteResult routed = route(placed, map, tc.layout, seed);
    for (int p : tc.layout) {
        tc.final_layout.push_back(routed.final_position.at(p));
    }
    tc.circuit = optimize(translate(routed.circuit, basis, map), level, seed);
    return tc;
}

TranspiledCircuit transpile(const Circuit &circuit, const NoiseModel &model, int level, uint64_t seed) {
    return transpile(circuit, model.coupling, model.basis_gates, level, seed, model.operational);
}

double verify_equivalence(const Circuit &original, const TranspiledCircuit &result) {
    const size_t n = original.num_qubits;
    if (n > 10 || result.num_virtual() > 10) {
        throw Error(ErrorCode::TooLarge, "equivalence oracle limited to 10 qubits");
    }
    if (result.num_virtual() != n) {
        throw Error(ErrorCode::InconsistentInputs, "layout size differs from the original circuit width");
    }
    Matrix u_orig = circuit_unitary(Circuit{n, original.ops, false});
    Matrix u_res = circuit_unitary(result.compact());

    std::map<int, int> compact_of;
    for (size_t v = 0; v < n; v++) {
        compact_of[result.layout[v]] = static_cast<int>(v);
    }
    std::vector<int> sigma(n);
    for (size_t v = 0; v < n; v++) {
        sigma[v] = compact_of.at(result.final_layout[v]);
    }
    const Eigen::Index dim = u_orig.rows();
    Matrix permuted(dim, dim);
    for (Eigen::Index x = 0; x < dim; x++) {
        Eigen::Index y = 0;
        for (size_t v = 0; v < n; v++) {
            if ((x >> v) & 1) {
                y |= Eigen::Index{1} << sigma[v];
            }
        }
        permuted.row(y) = u_orig.row(x);
    }
    return phase_insensitive_distance(permuted, u_res);
}

nlohmann::json transpiled_to_json(const TranspiledCircuit &tc) {
    nlohmann::json j = circuit_to_json(tc.circuit);
    j["layout"] = tc.layout;
    j["final_layout"] = tc.final_layout;
    j["level"] = tc.level;
    return j;
}

TranspiledCircuit transpiled_from_json(const nlohmann::json &j) {
    TranspiledCircuit tc;
    tc.circuit = circuit_from_json(j);
    try {
        tc.layout = j.at("layout").get<std::vector<int>>();
        tc.final_layout = j.value("final_layout", tc.layout);
        tc.level = j.value("level", 0);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::SchemaMismatch, std::string("transpiled circuit JSON: ") + e.what());
    }
    return tc;
}

}  // namespace qtwin
