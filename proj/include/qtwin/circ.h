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

#ifndef QTWIN_CIRC_H
#define QTWIN_CIRC_H

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtwin/linalg.h"

namespace qtwin {

struct GateOp {
    std::string label;
    std::vector<int> qubits;
    std::vector<double> params;  // radians

    bool operator==(const GateOp &) const = default;
};

/// Gate sequence over qubits 0..num_qubits-1. Qubit 0 is the least-significant
/// bit of basis-state indices and the rightmost character of outcome strings.
struct Circuit {
    size_t num_qubits = 0;
    std::vector<GateOp> ops;
    bool measured = false;  // terminal measurement of every qubit

    bool operator==(const Circuit &) const = default;

    /// Throws UnknownGate or InconsistentInputs.
    void validate() const;
};

bool is_known_gate(std::string_view label);
/// Throws UnknownGate.
int gate_arity(std::string_view label);
int gate_param_count(std::string_view label);

/// Unitary of a named gate in the local-index convention (qubits[0] is bit 0).
/// ecr = (I(x)X - X(x)Y)/sqrt(2). Throws UnknownGate.
Matrix gate_matrix(std::string_view label, std::span<const double> params = {});
Matrix gate_matrix(const GateOp &op);

/// `depth` layers; each layer splits the qubits into random pairs and singles.
/// Fully determined by the arguments.
Circuit random_circuit(size_t num_qubits, size_t depth, uint64_t seed);

/// Product of the embedded gate matrices in op order, ignoring measurement.
/// Throws TooLarge above 10 qubits.
Matrix circuit_unitary(const Circuit &circuit);

nlohmann::json circuit_to_json(const Circuit &circuit);
/// Throws SchemaMismatch.
Circuit circuit_from_json(const nlohmann::json &j);

}  // namespace qtwin

#endif
