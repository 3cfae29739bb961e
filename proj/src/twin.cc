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

#include "qtwin/twin.h"

#include <algorithm>
#include <cstdio>

#include "qtwin/error.h"

namespace qtwin {

namespace {

std::string fnv1a_hex(const std::string &text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

const Channel *NoiseModel::gate_channel(const std::string &label, const std::vector<int> &qubits) const {
    auto it = gate_channels.find(GateKey{label, qubits});
    return it == gate_channels.end() ? nullptr : &it->second;
}

const AssignmentMatrix *NoiseModel::readout_for(int qubit) const {
    auto it = readout.find(qubit);
    return it == readout.end() ? nullptr : &it->second;
}

std::string describe(const TwinOptions &options) {
    std::string s = options.noiseless ? "noiseless" : (options.depol_mode == DepolMode::Direct ? "direct" : "adjusted");
    s += options.include_id_error ? ",id-error" : ",no-id-error";
    s += options.clamp_policy == ClampPolicy::Clamp ? ",clamp" : ",reject";
    return s;
}

double depol_param(double reported_error, const Channel &relax, int d, DepolMode mode, std::vector<std::string> *warnings) {
    if (!(reported_error >= 0 && reported_error <= 1)) {
        throw Error(ErrorCode::BadProbability, "reported gate error outside [0,1]");
    }
    if (mode == DepolMode::Direct) {
        return reported_error;
    }
    const double dd = static_cast<double>(d) * d;
    const double f_relax = relax.process_fidelity();
    const double f_target = ((1 - reported_error) * (d + 1) - 1) / d;
    const double denom = f_relax - 1 / dd;
    double lambda = denom > 0 ? (f_relax - f_target) / denom : 0.0;
    if (!(lambda >= 0 && lambda <= 1)) {
        double clamped = std::clamp(denom > 0 ? lambda : 0.0, 0.0, 1.0);
        if (warnings) {
            char buf[160];
            std::snprintf(
                buf, sizeof(buf), "adjusted depolarizing parameter %.6g clamped to %.6g (relaxation fidelity %.9g, target %.9g)",
                lambda, clamped, f_relax, f_target);
            warnings->push_back(buf);
        }
        lambda = clamped;
    }
    return lambda;
}

NoiseModel build_noise_model(const CalibrationTable &table, const CouplingMap &map, const TwinOptions &options) {
    if (!(map == reconstruct_coupling(table).map)) {
        throw Error(ErrorCode::InconsistentInputs, "coupling map was not reconstructed from this calibration table");
    }

    NoiseModel model;
    model.source = {table.device_name, fnv1a_hex(to_canonical_csv(table)), describe(options)};

    std::set<std::string> labels;
    for (const auto &q : table.qubits) {
        for (const auto &[label, e] : q.single_qubit_gate_errors) {
            labels.insert(label);
        }
        if (q.operational) {
            model.operational.insert(q.index);
        }
    }
    for (const auto &p : table.pairs) {
        for (const auto &[label, e] : p.gate_errors) {
            labels.insert(label);
        }
    }
    model.basis_gates.assign(labels.begin(), labels.end());
    model.basis_gates.push_back("measure");
    model.coupling = map.restricted_to(model.operational);
    if (options.noiseless) {
        return model;
    }

    auto depol = [&](double e, const Channel &relax, int d, const std::string &where) {
        std::vector<std::string> notes;
        double lambda = depol_param(e, relax, d, options.depol_mode, &notes);
        if (!notes.empty() && options.clamp_policy == ClampPolicy::Reject) {
            throw Error(ErrorCode::InconsistentInputs, where + ": " + notes.front());
        }
        for (auto &n : notes) {
            model.warnings.push_back(where + ": " + n);
        }
        return lambda;
    };

    for (const auto &q : table.qubits) {
        if (!q.operational) {
            continue;
        }
        model.readout.emplace(q.index, readout_matrix(q.prob_meas1_prep0, q.prob_meas0_prep1));
        for (const auto &[label, e] : q.single_qubit_gate_errors) {
            if (label == "id" && !options.include_id_error) {
                continue;
            }
            auto len = q.single_qubit_gate_lengths.find(label);
            if (len == q.single_qubit_gate_lengths.end()) {
                throw Error(
                    ErrorCode::MissingCalibration,
                    "qubit " + std::to_string(q.index) + " reports a " + label + " error but no gate length");
            }
            if (e == 0 && len->second == 0) {
                continue;
            }
            Channel relax = thermal_relaxation_channel(q.t1, q.t2, len->second);
            const std::string where = label + " on qubit " + std::to_string(q.index);
            double lambda = depol(e, relax, 2, where);
            model.gate_channels.emplace(GateKey{label, {q.index}}, compose(relax, depolarizing_channel(lambda, 1)));
        }
    }

    for (const auto &[c, t] : model.coupling.edges()) {
        const PairRecord *pair = table.find_pair(c, t);
        const auto &qc = table.qubits[c];
        const auto &qt = table.qubits[t];
        for (const auto &[label, e] : pair->gate_errors) {
            auto len = pair->gate_lengths.find(label);
            if (len == pair->gate_lengths.end()) {
                throw Error(
                    ErrorCode::MissingCalibration,
                    "pair " + std::to_string(c) + "_" + std::to_string(t) + " reports a " + label + " error but no gate length");
            }
            const double duration = len->second;
            Channel relax = tensor(
                thermal_relaxation_channel(qc.t1, qc.t2, duration), thermal_relaxation_channel(qt.t1, qt.t2, duration));
            const std::string where = label + " on pair " + std::to_string(c) + "_" + std::to_string(t);
            double lambda = depol(e, relax, 4, where);
            model.gate_channels.emplace(GateKey{label, {c, t}}, compose(relax, depolarizing_channel(lambda, 2)));
        }
    }
    return model;
}

}  // namespace qtwin
