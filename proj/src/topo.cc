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

#include "qtwin/topo.h"

#include <algorithm>
#include <limits>
#include <queue>

#include "nlohmann/json.hpp"
#include "qtwin/error.h"

namespace qtwin {

CouplingMap::CouplingMap(size_t num_qubits, std::set<std::pair<int, int>> edges)
    : num_qubits_(num_qubits), edges_(std::move(edges)), adjacency_(num_qubits) {
    for (const auto &[a, b] : edges_) {
        if (a == b || a < 0 || b < 0 || static_cast<size_t>(a) >= num_qubits || static_cast<size_t>(b) >= num_qubits) {
            throw Error(
                ErrorCode::InconsistentInputs,
                "invalid coupling edge (" + std::to_string(a) + ", " + std::to_string(b) + ") for " +
                    std::to_string(num_qubits) + " qubits");
        }
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
}

bool CouplingMap::has_directed_edge(int control, int target) const {
    return edges_.count({control, target}) > 0;
}

bool CouplingMap::connected(int a, int b) const {
    return has_directed_edge(a, b) || has_directed_edge(b, a);
}

const std::vector<int> &CouplingMap::neighbors(int q) const {
    return adjacency_.at(q);
}

CouplingMap CouplingMap::restricted_to(const std::set<int> &keep) const {
    std::set<std::pair<int, int>> kept;
    for (const auto &e : edges_) {
        if (keep.count(e.first) && keep.count(e.second)) {
            kept.insert(e);
        }
    }
    return CouplingMap(num_qubits_, std::move(kept));
}

CouplingReconstruction reconstruct_coupling(const CalibrationTable &table) {
    std::set<std::pair<int, int>> edges;
    for (const auto &p : table.pairs) {
        if (!p.gate_errors.empty()) {
            edges.insert({p.control, p.target});
        }
    }
    CouplingReconstruction out{CouplingMap(table.num_qubits(), std::move(edges)), {}};
    if (out.map.edges().empty()) {
        out.warnings.push_back("no two-qubit gate entries found; coupling map has no edges");
    }
    return out;
}

std::vector<int> shortest_path(const CouplingMap &map, int a, int b) {
    const int n = static_cast<int>(map.num_qubits());
    if (a < 0 || b < 0 || a >= n || b >= n) {
        throw Error(ErrorCode::NoPath, "qubit out of range");
    }
    // BFS from b gives distances to b; walking from a through the smallest
    // neighbour that is one step closer yields the lexicographically smallest path.
    constexpr int kUnreached = std::numeric_limits<int>::max();
    std::vector<int> dist(n, kUnreached);
    std::queue<int> frontier;
    dist[b] = 0;
    frontier.push(b);
    while (!frontier.empty()) {
        int q = frontier.front();
        frontier.pop();
        for (int nb : map.neighbors(q)) {
            if (dist[nb] == kUnreached) {
                dist[nb] = dist[q] + 1;
                frontier.push(nb);
            }
        }
    }
    if (dist[a] == kUnreached) {
        throw Error(ErrorCode::NoPath, "no path between qubits " + std::to_string(a) + " and " + std::to_string(b));
    }
    std::vector<int> path{a};
    int cur = a;
    while (cur != b) {
        for (int nb : map.neighbors(cur)) {
            if (dist[nb] == dist[cur] - 1) {
                cur = nb;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

std::string edges_to_json(const CouplingMap &map) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &[a, b] : map.edges()) {
        j.push_back({a, b});
    }
    return j.dump();
}

}  // namespace qtwin
