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

#ifndef QTWIN_TOPO_H
#define QTWIN_TOPO_H

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qtwin/calib.h"

namespace qtwin {

/// Directed graph of qubit pairs on which a native two-qubit gate may act.
/// (a, b) being present says nothing about (b, a).
class CouplingMap {
   public:
    CouplingMap() = default;
    /// Throws InconsistentInputs on self-loops or out-of-range endpoints.
    CouplingMap(size_t num_qubits, std::set<std::pair<int, int>> edges);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::set<std::pair<int, int>> &edges() const {
        return edges_;
    }

    bool has_directed_edge(int control, int target) const;
    /// True when either orientation is present.
    bool connected(int a, int b) const;
    /// Undirected neighbours in ascending order.
    const std::vector<int> &neighbors(int q) const;

    /// Keeps only edges whose endpoints are both in `keep`.
    CouplingMap restricted_to(const std::set<int> &keep) const;

    bool operator==(const CouplingMap &other) const {
        return num_qubits_ == other.num_qubits_ && edges_ == other.edges_;
    }

   private:
    size_t num_qubits_ = 0;
    std::set<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

struct CouplingReconstruction {
    CouplingMap map;
    std::vector<std::string> warnings;
};

/// Edge (c, t) for every pair record that carries at least one two-qubit gate error.
CouplingReconstruction reconstruct_coupling(const CalibrationTable &table);

/// Shortest path between a and b in the undirected view. Among equally short
/// paths the lexicographically smallest sequence wins. Throws NoPath.
std::vector<int> shortest_path(const CouplingMap &map, int a, int b);

/// JSON list of [control, target] pairs.
std::string edges_to_json(const CouplingMap &map);

}  // namespace qtwin

#endif
