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

#include "qtwin/calib.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qtwin/error.h"

namespace qtwin {

namespace {

constexpr std::array<const char *, 5> kSingleQubitLabels{"id", "rz", "sx", "x", "rx"};
constexpr std::array<const char *, 3> kTwoQubitLabels{"ecr", "cz", "rzz"};

struct CsvRecord {
    size_t line;
    std::vector<std::string> cells;
};

// RFC 4180 style reader: quoted cells, doubled quotes, CRLF, leading BOM.
std::vector<CsvRecord> read_csv(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    std::vector<CsvRecord> records;
    CsvRecord current{1, {}};
    std::string cell;
    bool in_quotes = false;
    bool row_has_content = false;
    size_t line = 1;
    auto end_row = [&]() {
        current.cells.push_back(std::move(cell));
        cell.clear();
        if (row_has_content) {
            records.push_back(std::move(current));
        }
        current = CsvRecord{line + 1, {}};
        row_has_content = false;
    };
    for (size_t i = 0; i < text.size(); i++) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    i++;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    line++;
                }
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                current.cells.push_back(std::move(cell));
                cell.clear();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                line++;
                break;
            default:
                if (c != ' ' && c != '\t') {
                    row_has_content = true;
                }
                cell.push_back(c);
        }
    }
    if (row_has_content || !cell.empty()) {
        current.cells.push_back(std::move(cell));
        records.push_back(std::move(current));
    }
    return records;
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) {
        b++;
    }
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) {
        e--;
    }
    return std::string(s.substr(b, e - b));
}

std::string ascii_lower(std::string s) {
    for (auto &c : s) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return s;
}

enum class ColumnKind {
    Qubit,
    Operational,
    T1,
    T2,
    Frequency,
    Anharmonicity,
    ReadoutAssignment,
    Meas0Prep1,
    Meas1Prep0,
    ReadoutLength,
    SingleQubitError,
    SingleQubitLength,
    PairError,
    PairLength,
};

struct Column {
    ColumnKind kind;
    std::string label;  // gate label for error columns
    double scale = 1;
    size_t index = 0;
    std::string header;
};

std::optional<double> unit_scale(const std::string &unit) {
    if (unit == "us" || unit == "\xC2\xB5s" || unit == "\xCE\xBCs") {
        return 1e-6;
    }
    if (unit == "ns") {
        return 1e-9;
    }
    if (unit == "ghz") {
        return 1e9;
    }
    if (unit == "mhz") {
        return 1e6;
    }
    if (unit == "s" || unit == "hz") {
        return 1.0;
    }
    return std::nullopt;
}

std::optional<Column> classify_header(const std::string &raw, size_t index) {
    std::string name = ascii_lower(trim(raw));
    double scale = 1;
    if (!name.empty() && name.back() == ')') {
        size_t open = name.rfind('(');
        if (open != std::string::npos) {
            if (auto s = unit_scale(trim(name.substr(open + 1, name.size() - open - 2)))) {
                scale = *s;
                name = trim(name.substr(0, open));
            }
        }
    }
    auto col = [&](ColumnKind kind, std::string label = {}) {
        return Column{kind, std::move(label), scale, index, trim(raw)};
    };
    static const std::map<std::string, std::pair<ColumnKind, std::string>> kNames{
        {"qubit", {ColumnKind::Qubit, ""}},
        {"operational", {ColumnKind::Operational, ""}},
        {"t1", {ColumnKind::T1, ""}},
        {"t2", {ColumnKind::T2, ""}},
        {"frequency", {ColumnKind::Frequency, ""}},
        {"anharmonicity", {ColumnKind::Anharmonicity, ""}},
        {"readout assignment error", {ColumnKind::ReadoutAssignment, ""}},
        {"prob meas0 prep1", {ColumnKind::Meas0Prep1, ""}},
        {"prob meas1 prep0", {ColumnKind::Meas1Prep0, ""}},
        {"readout length", {ColumnKind::ReadoutLength, ""}},
        {"id error", {ColumnKind::SingleQubitError, "id"}},
        {"z-axis rotation (rz) error", {ColumnKind::SingleQubitError, "rz"}},
        {"rz error", {ColumnKind::SingleQubitError, "rz"}},
        {"\xE2\x88\x9Ax (sx) error", {ColumnKind::SingleQubitError, "sx"}},
        {"sqrt(x) (sx) error", {ColumnKind::SingleQubitError, "sx"}},
        {"sx error", {ColumnKind::SingleQubitError, "sx"}},
        {"pauli-x error", {ColumnKind::SingleQubitError, "x"}},
        {"x error", {ColumnKind::SingleQubitError, "x"}},
        {"rx error", {ColumnKind::SingleQubitError, "rx"}},
        {"single-qubit gate length", {ColumnKind::SingleQubitLength, ""}},
        {"gate length", {ColumnKind::PairLength, ""}},
        {"ecr error", {ColumnKind::PairError, "ecr"}},
        {"cz error", {ColumnKind::PairError, "cz"}},
        {"rzz error", {ColumnKind::PairError, "rzz"}},
    };
    auto it = kNames.find(name);
    if (it == kNames.end()) {
        return std::nullopt;
    }
    return col(it->second.first, it->second.second);
}

[[noreturn]] void malformed(size_t line, const Column &column, const std::string &cell, const std::string &why) {
    throw Error(
        ErrorCode::MalformedCell,
        "line " + std::to_string(line) + ", column '" + column.header + "': '" + cell + "' " + why);
}

// Only '.' is accepted as decimal separator; the whole cell must be consumed.
std::optional<double> parse_double(const std::string &s) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

std::optional<int> parse_int(const std::string &s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
        return std::nullopt;
    }
    return value;
}

std::optional<bool> parse_bool(const std::string &s) {
    std::string v = ascii_lower(s);
    if (v == "yes" || v == "true" || v == "1" || v == "y") {
        return true;
    }
    if (v == "no" || v == "false" || v == "0" || v == "n") {
        return false;
    }
    return std::nullopt;
}

struct PairEntry {
    int control;
    int target;
    double value;
};

std::vector<PairEntry> parse_pair_cell(const std::string &cell, int row_qubit, size_t line, const Column &column) {
    std::vector<PairEntry> out;
    if (cell.empty()) {
        return out;
    }
    std::stringstream ss(cell);
    std::string raw;
    while (std::getline(ss, raw, ';')) {
        std::string entry = trim(raw);
        size_t under = entry.find('_');
        size_t colon = entry.find(':');
        if (under == std::string::npos || colon == std::string::npos || colon < under) {
            malformed(line, column, cell, "is not a control_target:value list");
        }
        auto control = parse_int(trim(entry.substr(0, under)));
        auto target = parse_int(trim(entry.substr(under + 1, colon - under - 1)));
        auto value = parse_double(trim(entry.substr(colon + 1)));
        if (!control || !target || !value) {
            malformed(line, column, cell, "has an unparsable entry '" + entry + "'");
        }
        if (*control != row_qubit) {
            malformed(line, column, cell, "names control " + std::to_string(*control) + " on the row of qubit " + std::to_string(row_qubit));
        }
        if (*control == *target) {
            malformed(line, column, cell, "couples a qubit to itself");
        }
        out.push_back({*control, *target, *value * column.scale});
    }
    if (!cell.empty() && cell.back() == ';') {
        malformed(line, column, cell, "has an empty entry");
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string clamp_probability(double &p, const std::string &what) {
    if (p < 0 || p > 1) {
        double old = p;
        p = std::clamp(p, 0.0, 1.0);
        return what + " = " + format_double(old) + " outside [0,1], clamped to " + format_double(p);
    }
    return {};
}

}  // namespace

const PairRecord *CalibrationTable::find_pair(int control, int target) const {
    for (const auto &p : pairs) {
        if (p.control == control && p.target == target) {
            return &p;
        }
    }
    return nullptr;
}

CalibrationTable parse_calibration_csv(std::string_view text, const std::string &device_name) {
    auto records = read_csv(text);
    if (records.empty()) {
        throw Error(ErrorCode::EmptyTable, "calibration CSV has no header row");
    }

    CalibrationTable table;
    table.device_name = device_name;

    std::vector<Column> columns;
    std::set<ColumnKind> present;
    std::set<std::string> one_q_labels;
    std::set<std::string> two_q_labels;
    for (size_t i = 0; i < records[0].cells.size(); i++) {
        if (auto c = classify_header(records[0].cells[i], i)) {
            present.insert(c->kind);
            if (c->kind == ColumnKind::SingleQubitError) {
                one_q_labels.insert(c->label);
            } else if (c->kind == ColumnKind::PairError) {
                two_q_labels.insert(c->label);
            }
            columns.push_back(std::move(*c));
        }
    }

    auto require = [&](ColumnKind kind, const char *name) {
        if (!present.count(kind)) {
            throw Error(ErrorCode::MissingColumn, std::string("required column '") + name + "' not found");
        }
    };
    require(ColumnKind::Qubit, "Qubit");
    require(ColumnKind::T1, "T1 (us)");
    require(ColumnKind::T2, "T2 (us)");
    require(ColumnKind::Meas0Prep1, "Prob meas0 prep1");
    require(ColumnKind::Meas1Prep0, "Prob meas1 prep0");
    require(ColumnKind::ReadoutLength, "Readout length (ns)");
    require(ColumnKind::SingleQubitError, "single-qubit gate error");
    require(ColumnKind::SingleQubitLength, "Single-qubit gate length (ns)");

    auto note_absent = [&](ColumnKind kind, const char *what) {
        if (!present.count(kind)) {
            table.warnings.push_back(std::string("column '") + what + "' absent");
        }
    };
    note_absent(ColumnKind::Operational, "Operational");
    note_absent(ColumnKind::Frequency, "Frequency (GHz)");
    note_absent(ColumnKind::Anharmonicity, "Anharmonicity (GHz)");
    note_absent(ColumnKind::ReadoutAssignment, "Readout assignment error");
    for (const char *label : kSingleQubitLabels) {
        if (!one_q_labels.count(label)) {
            table.warnings.push_back(std::string("single-qubit gate error column for '") + label + "' absent");
        }
    }
    for (const char *label : kTwoQubitLabels) {
        if (!two_q_labels.count(label)) {
            table.warnings.push_back(std::string("two-qubit gate error column for '") + label + "' absent");
        }
    }
    if (present.count(ColumnKind::PairLength) && two_q_labels.empty()) {
        table.warnings.push_back("'Gate length' column present without any two-qubit error column; lengths ignored");
    }
    if (!two_q_labels.empty() && !present.count(ColumnKind::PairLength)) {
        table.warnings.push_back("column 'Gate length (ns)' absent");
    }

    if (records.size() < 2) {
        throw Error(ErrorCode::EmptyTable, "calibration CSV has no data rows");
    }

    std::map<std::pair<int, int>, PairRecord> pairs;
    struct PendingPair {
        size_t line;
        const Column *column;
        PairEntry entry;
    };
    std::vector<PendingPair> pending_pairs;

    for (size_t r = 1; r < records.size(); r++) {
        const auto &rec = records[r];
        auto cell = [&](const Column &c) {
            return c.index < rec.cells.size() ? trim(rec.cells[c.index]) : std::string();
        };
        QubitRecord q;
        const Column *qubit_col = nullptr;
        for (const auto &c : columns) {
            if (c.kind == ColumnKind::Qubit) {
                qubit_col = &c;
            }
        }
        {
            std::string s = cell(*qubit_col);
            auto idx = parse_int(s);
            if (!idx) {
                malformed(rec.line, *qubit_col, s, "is not a qubit index");
            }
            q.index = *idx;
        }

        std::optional<double> one_q_length;
        for (const auto &c : columns) {
            std::string s = cell(c);
            auto number = [&](bool required) -> std::optional<double> {
                if (s.empty()) {
                    if (required) {
                        malformed(rec.line, c, s, "is empty");
                    }
                    return std::nullopt;
                }
                auto v = parse_double(s);
                if (!v) {
                    malformed(rec.line, c, s, "is not a number");
                }
                return *v * c.scale;
            };
            switch (c.kind) {
                case ColumnKind::Qubit:
                    break;
                case ColumnKind::Operational: {
                    auto b = parse_bool(s);
                    if (!b) {
                        malformed(rec.line, c, s, "is not a boolean");
                    }
                    q.operational = *b;
                    break;
                }
                case ColumnKind::T1:
                    q.t1 = *number(true);
                    break;
                case ColumnKind::T2:
                    q.t2 = *number(true);
                    break;
                case ColumnKind::Frequency:
                    q.frequency = number(false);
                    break;
                case ColumnKind::Anharmonicity:
                    q.anharmonicity = number(false);
                    break;
                case ColumnKind::ReadoutAssignment:
                    q.readout_assignment_error = *number(true);
                    break;
                case ColumnKind::Meas0Prep1:
                    q.prob_meas0_prep1 = *number(true);
                    break;
                case ColumnKind::Meas1Prep0:
                    q.prob_meas1_prep0 = *number(true);
                    break;
                case ColumnKind::ReadoutLength:
                    q.readout_length = *number(true);
                    break;
                case ColumnKind::SingleQubitError:
                    if (auto v = number(false)) {
                        q.single_qubit_gate_errors[c.label] = *v;
                    }
                    break;
                case ColumnKind::SingleQubitLength:
                    one_q_length = number(false);
                    break;
                case ColumnKind::PairError:
                case ColumnKind::PairLength:
                    for (const auto &e : parse_pair_cell(s, q.index, rec.line, c)) {
                        pending_pairs.push_back({rec.line, &c, e});
                    }
                    break;
            }
        }
        if (!present.count(ColumnKind::ReadoutAssignment)) {
            q.readout_assignment_error = 0.5 * (q.prob_meas0_prep1 + q.prob_meas1_prep0);
        }
        // rz is a virtual frame change: zero duration.
        for (const auto &label : one_q_labels) {
            if (label == "rz") {
                q.single_qubit_gate_lengths[label] = 0;
            } else if (one_q_length) {
                q.single_qubit_gate_lengths[label] = *one_q_length;
            }
        }
        table.qubits.push_back(std::move(q));
    }

    std::sort(table.qubits.begin(), table.qubits.end(), [](const auto &a, const auto &b) {
        return a.index < b.index;
    });
    for (size_t i = 0; i < table.qubits.size(); i++) {
        if (table.qubits[i].index != static_cast<int>(i)) {
            throw Error(
                ErrorCode::MalformedCell,
                "column 'Qubit': indices must be unique and cover 0.." + std::to_string(table.qubits.size() - 1) +
                    " (found " + std::to_string(table.qubits[i].index) + " at position " + std::to_string(i) + ")");
        }
    }

    const int n = static_cast<int>(table.qubits.size());
    std::set<std::tuple<int, int, size_t>> seen;
    for (const auto &p : pending_pairs) {
        const auto &e = p.entry;
        if (e.target >= n) {
            malformed(p.line, *p.column, std::to_string(e.control) + "_" + std::to_string(e.target), "targets a qubit absent from the table");
        }
        if (!seen.insert({e.control, e.target, p.column->index}).second) {
            malformed(p.line, *p.column, std::to_string(e.control) + "_" + std::to_string(e.target), "appears twice");
        }
        auto &rec = pairs[{e.control, e.target}];
        rec.control = e.control;
        rec.target = e.target;
        if (p.column->kind == ColumnKind::PairError) {
            rec.gate_errors[p.column->label] = e.value;
        } else {
            for (const auto &label : two_q_labels) {
                rec.gate_lengths[label] = e.value;
            }
        }
    }
    for (auto &[key, rec] : pairs) {
        table.pairs.push_back(std::move(rec));
    }
    return table;
}

CalibrationTable validate_table(CalibrationTable table) {
    auto warn = [&](std::string msg) {
        if (!msg.empty()) {
            table.warnings.push_back(std::move(msg));
        }
    };
    for (auto &q : table.qubits) {
        const std::string tag = "qubit " + std::to_string(q.index) + ": ";
        auto non_negative = [&](double &d, const char *what) {
            if (d < 0) {
                warn(tag + what + " negative (" + format_double(d) + "), clamped to 0");
                d = 0;
            }
        };
        non_negative(q.t1, "t1");
        non_negative(q.t2, "t2");
        non_negative(q.readout_length, "readout length");
        for (auto &[label, d] : q.single_qubit_gate_lengths) {
            non_negative(d, (label + " gate length").c_str());
        }
        if (q.operational && (q.t1 <= 0 || q.t2 <= 0)) {
            warn(tag + "operational qubit without positive t1/t2, flagged unusable");
            q.operational = false;
        }
        if (q.t1 > 0 && q.t2 > 2 * q.t1) {
            warn(tag + "t2 = " + format_double(q.t2) + " exceeds 2*t1 = " + format_double(2 * q.t1) + ", clamped");
            q.t2 = 2 * q.t1;
        }
        if (!q.operational) {
            warn(tag + "not operational, excluded from twin construction");
        }
        warn(clamp_probability(q.readout_assignment_error, tag + "readout assignment error"));
        warn(clamp_probability(q.prob_meas0_prep1, tag + "prob meas0 prep1"));
        warn(clamp_probability(q.prob_meas1_prep0, tag + "prob meas1 prep0"));
        for (auto &[label, p] : q.single_qubit_gate_errors) {
            warn(clamp_probability(p, tag + label + " error"));
        }
    }
    for (auto &pair : table.pairs) {
        const std::string tag = "pair " + std::to_string(pair.control) + "_" + std::to_string(pair.target) + ": ";
        for (auto &[label, p] : pair.gate_errors) {
            warn(clamp_probability(p, tag + label + " error"));
        }
        for (auto &[label, d] : pair.gate_lengths) {
            if (d < 0) {
                warn(tag + label + " gate length negative, clamped to 0");
                d = 0;
            }
        }
    }
    return table;
}

std::string to_canonical_csv(const CalibrationTable &table) {
    std::set<std::string> one_q;
    std::set<std::string> two_q;
    for (const auto &q : table.qubits) {
        for (const auto &[l, v] : q.single_qubit_gate_errors) {
            one_q.insert(l);
        }
        for (const auto &[l, v] : q.single_qubit_gate_lengths) {
            one_q.insert(l);
        }
    }
    for (const auto &p : table.pairs) {
        for (const auto &[l, v] : p.gate_errors) {
            two_q.insert(l);
        }
        for (const auto &[l, v] : p.gate_lengths) {
            two_q.insert(l);
        }
    }

    std::ostringstream out;
    out << "Qubit,Operational,T1 (s),T2 (s),Frequency (Hz),Anharmonicity (Hz),Readout assignment error,"
           "Prob meas0 prep1,Prob meas1 prep0,Readout length (s)";
    for (const auto &l : one_q) {
        out << "," << l << " error";
    }
    out << ",Single-qubit gate length (s)";
    for (const auto &l : two_q) {
        out << "," << l << " error";
    }
    out << ",Gate length (s)\n";

    auto opt = [](const std::optional<double> &v) {
        return v ? format_double(*v) : std::string();
    };
    for (const auto &q : table.qubits) {
        out << q.index << "," << (q.operational ? "Yes" : "No") << "," << format_double(q.t1) << ","
            << format_double(q.t2) << "," << opt(q.frequency) << "," << opt(q.anharmonicity) << ","
            << format_double(q.readout_assignment_error) << "," << format_double(q.prob_meas0_prep1) << ","
            << format_double(q.prob_meas1_prep0) << "," << format_double(q.readout_length);
        for (const auto &l : one_q) {
            auto it = q.single_qubit_gate_errors.find(l);
            out << "," << (it == q.single_qubit_gate_errors.end() ? std::string() : format_double(it->second));
        }
        std::optional<double> length;
        for (const auto &[l, v] : q.single_qubit_gate_lengths) {
            if (l != "rz") {
                length = v;
            }
        }
        out << "," << opt(length);
        auto pair_cell = [&](auto value_of) {
            std::string cell;
            for (const auto &p : table.pairs) {
                if (p.control != q.index) {
                    continue;
                }
                if (auto v = value_of(p)) {
                    if (!cell.empty()) {
                        cell += ";";
                    }
                    cell += std::to_string(p.control) + "_" + std::to_string(p.target) + ":" + format_double(*v);
                }
            }
            return cell;
        };
        for (const auto &l : two_q) {
            out << "," << pair_cell([&](const PairRecord &p) -> std::optional<double> {
                auto it = p.gate_errors.find(l);
                return it == p.gate_errors.end() ? std::nullopt : std::optional<double>(it->second);
            });
        }
        out << "," << pair_cell([&](const PairRecord &p) -> std::optional<double> {
            if (p.gate_lengths.empty()) {
                return std::nullopt;
            }
            return p.gate_lengths.begin()->second;
        });
        out << "\n";
    }
    return out.str();
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CalibrationTable load_calibration(const std::filesystem::path &path, std::string device_name) {
    if (device_name.empty()) {
        device_name = path.stem().string();
    }
    return validate_table(parse_calibration_csv(read_text_file(path), device_name));
}

}  // namespace qtwin
