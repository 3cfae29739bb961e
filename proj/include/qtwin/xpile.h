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

#ifndef QTWIN_XPILE_H
#define QTWIN_XPILE_H

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtwin/circ.h"
#include "qtwin/topo.h"

namespace qtwin {

struct NoiseModel;

/// A circuit over physical qubits plus where each virtual qubit starts and
/// where its state sits when the terminal measurement happens.
struct TranspiledCircuit {
    Circuit circuit;                // qubit indices are physical
    std::vector<int> layout;        // virtual -> physical before the first op
    std::vector<int> final_layout;  // virtual -> physical at measurement
    int level = 0;

    size_t num_virtual() const {
        return layout.size();
    }

    /// Identity layout, for running hand-built circuits on the engines.
    static TranspiledCircuit trivial(const Circuit &circuit);

    /// The same ops renumbered so that physical layout[v] becomes qubit v.
    /// Throws InconsistentInputs if an op touches a qubit outside the layout.
    Circuit compact() const;
};

/// Lowest-index connected set of `count` allowed physical qubits; virtual v maps
/// to the v-th smallest. Throws Unroutable.
std::vector<int> choose_layout(size_t count, const CouplingMap &map, const std::set<int> &allowed);

struct RouteResult {
    Circuit circuit;
    std::map<int, int> final_position;  // starting physical qubit -> physical qubit at the end
};

/// Inserts swaps so that every two-qubit op acts on connected qubits. Paths are
/// confined to `active`. The lower-index operand is moved. Throws Unroutable.
RouteResult route(const Circuit &placed, const CouplingMap &map, const std::vector<int> &active, uint64_t seed = 0);

/// Rewrites every op into `basis`, fixing two-qubit gate orientation against
/// the directed edges of `map`. Throws UnknownGate, NoDecomposition, Unroutable.
Circuit translate(const Circuit &routed, const std::vector<std::string> &basis, const CouplingMap &map);

/// Level 0 is the identity; 1 merges rz and cancels involutory pairs; 2 also
/// moves rz through cz/cx controls and the first qubit of ecr; 3 also
/// resynthesises single-qubit runs. Every level preserves the unitary up to phase.
Circuit optimize(const Circuit &translated, int level, uint64_t seed = 0);

/// layout -> route -> translate -> optimize. `allowed` restricts the layout
/// (empty means every qubit of the map).
TranspiledCircuit transpile(
    const Circuit &circuit, const CouplingMap &map, const std::vector<std::string> &basis, int level, uint64_t seed = 0,
    const std::set<int> &allowed = {});

/// Transpiles against a twin's operational coupling map and basis.
TranspiledCircuit transpile(const Circuit &circuit, const NoiseModel &model, int level, uint64_t seed = 0);

/// min over global phase of max|U_original (permuted by the layouts) - e^{i phi} U_result|.
/// Throws TooLarge above 10 virtual qubits.
double verify_equivalence(const Circuit &original, const TranspiledCircuit &result);

/// Single-qubit unitary as rz/sx gates on `qubit`: rz(a) sx rz(b) sx rz(c), with
/// the one-sx and zero-sx forms when the rotation allows and zero rz dropped.
std::vector<GateOp> synthesize_1q(const Matrix &u, int qubit);

nlohmann::json transpiled_to_json(const TranspiledCircuit &tc);
TranspiledCircuit transpiled_from_json(const nlohmann::json &j);

}  // namespace qtwin

#endif
