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

#ifndef QTWIN_TWIN_H
#define QTWIN_TWIN_H

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qtwin/calib.h"
#include "qtwin/chan.h"
#include "qtwin/topo.h"

namespace qtwin {

enum class DepolMode {
    // Reported gate error used directly as the depolarizing probability.
    Direct,
    // Depolarizing strength reduced by the infidelity the relaxation part already contributes.
    Adjusted,
};

enum class ClampPolicy {
    Clamp,
    Reject,
};

struct TwinOptions {
    DepolMode depol_mode = DepolMode::Direct;
    bool include_id_error = true;
    ClampPolicy clamp_policy = ClampPolicy::Clamp;
    // Ideal twin: same basis and coupling, no channels, perfect readout.
    bool noiseless = false;

    bool operator==(const TwinOptions &) const = default;
};

struct GateKey {
    std::string label;
    std::vector<int> qubits;

    auto operator<=>(const GateKey &) const = default;
    bool operator==(const GateKey &) const = default;
};

struct TwinSource {
    std::string device_name;
    std::string csv_digest;  // FNV-1a of the canonical CSV
    std::string options;
};

/// A device twin: channels bound to (gate, physical qubits), per-qubit readout
/// confusion, and the execution constraints circuits must be transpiled against.
struct NoiseModel {
    std::vector<std::string> basis_gates;
    std::map<GateKey, Channel> gate_channels;
    std::map<int, AssignmentMatrix> readout;
    CouplingMap coupling;  // edges between operational qubits only
    std::set<int> operational;
    TwinSource source;
    std::vector<std::string> warnings;

    /// nullptr means the gate executes noiselessly.
    const Channel *gate_channel(const std::string &label, const std::vector<int> &qubits) const;
    const AssignmentMatrix *readout_for(int qubit) const;
};

/// Throws InconsistentInputs if `map` is not the reconstruction of `table`,
/// MissingCalibration if a listed gate error has no duration.
NoiseModel build_noise_model(const CalibrationTable &table, const CouplingMap &map, const TwinOptions &options = {});

/// Depolarizing parameter for a gate with reported error `reported_error` whose
/// relaxation part is `relax` on dimension `d`. Adjusted-mode results outside
/// [0,1] are clamped and a message is appended to `warnings` when given.
double depol_param(
    double reported_error, const Channel &relax, int d, DepolMode mode, std::vector<std::string> *warnings = nullptr);

std::string describe(const TwinOptions &options);

}  // namespace qtwin

#endif
