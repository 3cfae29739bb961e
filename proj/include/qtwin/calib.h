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

#ifndef QTWIN_CALIB_H
#define QTWIN_CALIB_H

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtwin {

/// Calibration values for one physical qubit. Durations are in seconds,
/// frequencies in Hz, error rates are probabilities.
struct QubitRecord {
    int index = 0;
    bool operational = true;
    double t1 = 0;
    double t2 = 0;
    // Parsed for completeness; nothing downstream consumes these.
    std::optional<double> frequency;
    std::optional<double> anharmonicity;
    double readout_assignment_error = 0;
    double prob_meas0_prep1 = 0;
    double prob_meas1_prep0 = 0;
    double readout_length = 0;
    // Keys drawn from {id, rz, sx, x, rx}.
    std::map<std::string, double> single_qubit_gate_lengths;
    std::map<std::string, double> single_qubit_gate_errors;

    bool operator==(const QubitRecord &) const = default;
};

/// Calibration of one directed qubit pair. Keys drawn from {ecr, cz, rzz}.
struct PairRecord {
    int control = 0;
    int target = 0;
    std::map<std::string, double> gate_errors;
    std::map<std::string, double> gate_lengths;

    bool operator==(const PairRecord &) const = default;
};

struct CalibrationTable {
    std::string device_name;
    std::vector<QubitRecord> qubits;  // ordered by index, indices 0..n-1
    std::vector<PairRecord> pairs;    // ordered by (control, target)
    std::vector<std::string> warnings;

    size_t num_qubits() const {
        return qubits.size();
    }
    const PairRecord *find_pair(int control, int target) const;
};

/// Parses a vendor calibration export. Header names are matched
/// case-insensitively; a trailing unit in parentheses selects the scale
/// ("(us)" 1e-6, "(ns)" 1e-9, "(GHz)" 1e9, none or SI unit 1).
///
/// Pair-valued cells use `control_target:value` entries separated by ';'.
/// The control of every entry must be the row's own qubit.
///
/// Throws Error with MissingColumn, MalformedCell or EmptyTable.
CalibrationTable parse_calibration_csv(std::string_view text, const std::string &device_name);

/// Clamps t2 to 2*t1 and probabilities into [0,1], flags unusable qubits.
/// Never rejects; every adjustment is appended to `warnings`.
CalibrationTable validate_table(CalibrationTable table);

/// Writes the table in SI units ("(s)", "(Hz)") so that re-parsing is exact.
std::string to_canonical_csv(const CalibrationTable &table);

/// Reads, parses and validates a calibration file. The device name defaults to the file stem.
CalibrationTable load_calibration(const std::filesystem::path &path, std::string device_name = {});

std::string read_text_file(const std::filesystem::path &path);

}  // namespace qtwin

#endif
