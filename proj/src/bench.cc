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

#include "qtwin/bench.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qtwin/calib.h"
#include "qtwin/error.h"
#include "qtwin/rng.h"
#include "qtwin/topo.h"

namespace qtwin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string &what) {
    throw Error(ErrorCode::SchemaMismatch, what);
}

// Names end up inside file names.
void check_name(const std::string &kind, const std::string &name) {
    if (name.empty()) {
        schema_error(kind + " name is empty");
    }
    for (char c : name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
                  c == '.';
        if (!ok) {
            schema_error(kind + " name '" + name + "' may only contain letters, digits, '_', '-' and '.'");
        }
    }
}

fs::path resolve(const fs::path &base, const std::string &p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

const json &require(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        schema_error(where + " is missing '" + key + "'");
    }
    return j.at(key);
}

uint64_t as_count(const json &j, const std::string &what) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<int64_t>() < 0)) {
        schema_error(what + " must be a non-negative integer");
    }
    return j.get<uint64_t>();
}

std::string as_string(const json &j, const std::string &what) {
    if (!j.is_string()) {
        schema_error(what + " must be a string");
    }
    return j.get<std::string>();
}

VariantSpec parse_variant(const json &j, size_t index) {
    std::string where = "variants[" + std::to_string(index) + "]";
    if (!j.is_object()) {
        schema_error(where + " must be an object");
    }
    VariantSpec v;
    v.name = as_string(require(j, "name", where), where + ".name");
    if (j.contains("depol")) {
        std::string mode = as_string(j["depol"], where + ".depol");
        if (mode == "direct") {
            v.options.depol_mode = DepolMode::Direct;
        } else if (mode == "adjusted") {
            v.options.depol_mode = DepolMode::Adjusted;
        } else {
            schema_error(where + ".depol must be 'direct' or 'adjusted'");
        }
    }
    if (j.contains("include_id_error")) {
        if (!j["include_id_error"].is_boolean()) {
            schema_error(where + ".include_id_error must be a boolean");
        }
        v.options.include_id_error = j["include_id_error"].get<bool>();
    }
    if (j.contains("clamp")) {
        std::string policy = as_string(j["clamp"], where + ".clamp");
        if (policy == "clamp") {
            v.options.clamp_policy = ClampPolicy::Clamp;
        } else if (policy == "reject") {
            v.options.clamp_policy = ClampPolicy::Reject;
        } else {
            schema_error(where + ".clamp must be 'clamp' or 'reject'");
        }
    }
    if (j.contains("noiseless")) {
        if (!j["noiseless"].is_boolean()) {
            schema_error(where + ".noiseless must be a boolean");
        }
        v.options.noiseless = j["noiseless"].get<bool>();
    }
    if (j.contains("engine")) {
        std::string engine = as_string(j["engine"], where + ".engine");
        if (engine == "density") {
            v.engine = EngineKind::Density;
        } else if (engine == "trajectory") {
            v.engine = EngineKind::Trajectory;
        } else {
            schema_error(where + ".engine must be 'density' or 'trajectory'");
        }
    }
    return v;
}

std::string dump(const json &j) {
    return j.dump(2) + "\n";
}

json read_json(const fs::path &path) {
    std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
    }
}

Circuit load_circuit(const CircuitSpec &c) {
    if (c.file.empty()) {
        return random_circuit(c.num_qubits, c.depth, c.seed);
    }
    return circuit_from_json(read_json(c.file));
}

json error_json(const Error &e) {
    return {{"code", error_code_name(e.code())}, {"message", e.what()}};
}

std::string experiment_id(const ExperimentRecord &e) {
    return e.device + "/" + e.circuit_id + "/" + std::to_string(e.level);
}

}  // namespace

void ExperimentSpec::validate() const {
    if (shots < 1) {
        schema_error("shots must be at least 1");
    }
    if (devices.empty() || circuits.empty() || variants.empty() || levels.empty()) {
        schema_error("spec needs at least one device, circuit, variant and level");
    }
    std::set<std::string> seen;
    for (const auto &d : devices) {
        check_name("device", d.name);
        if (!seen.insert(d.name).second) {
            schema_error("duplicate device name '" + d.name + "'");
        }
    }
    seen.clear();
    for (const auto &c : circuits) {
        check_name("circuit", c.id);
        if (!seen.insert(c.id).second) {
            schema_error("duplicate circuit id '" + c.id + "'");
        }
        if (c.file.empty() && c.num_qubits == 0) {
            schema_error("circuit '" + c.id + "' needs num_qubits >= 1 or a file");
        }
    }
    seen = {"hardware"};
    for (const auto &v : variants) {
        check_name("variant", v.name);
        if (!seen.insert(v.name).second) {
            schema_error("duplicate or reserved variant name '" + v.name + "'");
        }
    }
    std::set<int> lv;
    for (int l : levels) {
        if (l < 0 || l > 3 || !lv.insert(l).second) {
            schema_error("levels must be distinct values in 0..3");
        }
    }
    for (const auto &h : hardware_counts) {
        if (h.level < 0 || h.level > 3) {
            schema_error("hardware_counts level must be in 0..3");
        }
    }
    if (sweep) {
        if (sweep->repetitions < 2) {
            schema_error("sweep repetitions must be at least 2");
        }
        if (sweep->ladder.empty() || sweep->ladder[0] < 1 ||
            std::adjacent_find(sweep->ladder.begin(), sweep->ladder.end(), std::greater_equal<>()) != sweep->ladder.end()) {
            schema_error("sweep ladder must be strictly increasing positive shot counts");
        }
        if (sweep->level < 0 || sweep->level > 3) {
            schema_error("sweep level must be in 0..3");
        }
    }
}

ExperimentSpec parse_experiment_spec(const json &j, const fs::path &base_dir) {
    if (!j.is_object()) {
        schema_error("spec must be a JSON object");
    }
    ExperimentSpec spec;
    if (j.contains("seed")) {
        spec.seed = as_count(j["seed"], "seed");
    }
    std::vector<json> devices;
    if (j.contains("devices")) {
        if (!j["devices"].is_array()) {
            schema_error("devices must be an array");
        }
        devices.assign(j["devices"].begin(), j["devices"].end());
    } else {
        devices.push_back(require(j, "device", "spec"));
    }
    for (const auto &d : devices) {
        DeviceSpec ds;
        ds.csv = resolve(base_dir, as_string(require(d, "csv", "device"), "device.csv"));
        ds.name = d.contains("name") ? as_string(d["name"], "device.name") : ds.csv.stem().string();
        spec.devices.push_back(ds);
    }
    const json &circuits = require(j, "circuits", "spec");
    if (!circuits.is_array()) {
        schema_error("circuits must be an array");
    }
    for (const auto &c : circuits) {
        CircuitSpec cs;
        cs.id = as_string(require(c, "id", "circuit"), "circuit.id");
        if (c.contains("file")) {
            cs.file = resolve(base_dir, as_string(c["file"], "circuit.file"));
        } else {
            cs.num_qubits = as_count(require(c, "num_qubits", "circuit"), "circuit.num_qubits");
            cs.depth = as_count(require(c, "depth", "circuit"), "circuit.depth");
            cs.seed = as_count(require(c, "seed", "circuit"), "circuit.seed");
        }
        spec.circuits.push_back(cs);
    }
    if (j.contains("levels")) {
        if (!j["levels"].is_array()) {
            schema_error("levels must be an array");
        }
        for (const auto &l : j["levels"]) {
            spec.levels.push_back(static_cast<int>(as_count(l, "level")));
        }
    } else {
        spec.levels = {0, 1, 2, 3};
    }
    spec.shots = as_count(require(j, "shots", "spec"), "shots");
    if (j.contains("variants")) {
        if (!j["variants"].is_array()) {
            schema_error("variants must be an array");
        }
        for (size_t i = 0; i < j["variants"].size(); i++) {
            spec.variants.push_back(parse_variant(j["variants"][i], i));
        }
    } else {
        spec.variants.push_back(VariantSpec{"twin", {}, EngineKind::Density});
    }
    if (j.contains("hardware_counts")) {
        if (!j["hardware_counts"].is_array()) {
            schema_error("hardware_counts must be an array");
        }
        for (const auto &h : j["hardware_counts"]) {
            HardwareCountsSpec hs;
            hs.device = as_string(require(h, "device", "hardware_counts"), "hardware_counts.device");
            hs.circuit_id = as_string(require(h, "circuit_id", "hardware_counts"), "hardware_counts.circuit_id");
            hs.level = static_cast<int>(as_count(require(h, "level", "hardware_counts"), "hardware_counts.level"));
            hs.path = resolve(base_dir, as_string(require(h, "path", "hardware_counts"), "hardware_counts.path"));
            spec.hardware_counts.push_back(hs);
        }
    }
    if (j.contains("sweep")) {
        const json &s = j["sweep"];
        SweepSpec ss;
        ss.ladder = default_ladder();
        if (s.contains("ladder")) {
            if (!s["ladder"].is_array()) {
                schema_error("sweep.ladder must be an array");
            }
            ss.ladder.clear();
            for (const auto &r : s["ladder"]) {
                ss.ladder.push_back(as_count(r, "sweep.ladder entry"));
            }
        }
        if (s.contains("repetitions")) {
            ss.repetitions = as_count(s["repetitions"], "sweep.repetitions");
        }
        if (s.contains("level")) {
            ss.level = static_cast<int>(as_count(s["level"], "sweep.level"));
        }
        spec.sweep = ss;
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const fs::path &path) {
    return parse_experiment_spec(read_json(path), path.parent_path());
}

std::vector<uint64_t> default_ladder() {
    std::vector<uint64_t> ladder = {1000};
    for (uint64_t s = 5000; s <= 100000; s += 5000) {
        ladder.push_back(s);
    }
    return ladder;
}

SweepResult sweep_distribution(
    const OutcomeDistribution &dist, const std::vector<uint64_t> &ladder, size_t repetitions, uint64_t seed) {
    if (repetitions < 2) {
        throw Error(ErrorCode::InconsistentInputs, "a sweep needs at least two repetitions");
    }
    if (ladder.empty() || ladder[0] < 1 ||
        std::adjacent_find(ladder.begin(), ladder.end(), std::greater_equal<>()) != ladder.end()) {
        throw Error(ErrorCode::InconsistentInputs, "shot ladder must be strictly increasing and positive");
    }
    const size_t rungs = ladder.size();
    const size_t dim = dist.probs.size();
    OutcomeSampler sampler(dist);

    // snapshots[(r * rungs + k) * dim + outcome]
    std::vector<uint64_t> snapshots(repetitions * rungs * dim, 0);
    std::vector<uint64_t> current(dim);
    for (size_t r = 0; r < repetitions; r++) {
        std::fill(current.begin(), current.end(), 0);
        Rng rng(mix_seed(seed, r));
        uint64_t drawn = 0;
        for (size_t k = 0; k < rungs; k++) {
            for (; drawn < ladder[k]; drawn++) {
                current[sampler.draw(rng)]++;
            }
            std::copy(current.begin(), current.end(), snapshots.begin() + (r * rungs + k) * dim);
        }
    }

    SweepResult out;
    out.ladder = ladder;
    out.repetitions = repetitions;
    for (size_t k = 0; k < rungs; k++) {
        double lo = 100;
        double hi = 0;
        double sum = 0;
        size_t pairs = 0;
        for (size_t a = 0; a < repetitions; a++) {
            std::span<const uint64_t> x(snapshots.data() + (a * rungs + k) * dim, dim);
            for (size_t b = a + 1; b < repetitions; b++) {
                std::span<const uint64_t> y(snapshots.data() + (b * rungs + k) * dim, dim);
                double s = weighted_jaccard(x, y);
                lo = std::min(lo, s);
                hi = std::max(hi, s);
                sum += s;
                pairs++;
            }
        }
        out.min_similarity.push_back(lo);
        out.max_similarity.push_back(hi);
        out.mean_similarity.push_back(sum / static_cast<double>(pairs));
    }
    return out;
}

SweepResult sweep_shots(
    const TranspiledCircuit &tc, const NoiseModel &model, const std::vector<uint64_t> &ladder, size_t repetitions,
    uint64_t seed) {
    return sweep_distribution(simulate_density(tc, model), ladder, repetitions, seed);
}

json sweep_to_json(const SweepResult &sweep) {
    json rungs = json::array();
    for (size_t k = 0; k < sweep.ladder.size(); k++) {
        rungs.push_back({
            {"shots", sweep.ladder[k]},
            {"min", sweep.min_similarity[k]},
            {"max", sweep.max_similarity[k]},
            {"mean", sweep.mean_similarity[k]},
        });
    }
    size_t pairs = sweep.repetitions * (sweep.repetitions - 1) / 2;
    return {{"repetitions", sweep.repetitions}, {"pairs_per_rung", pairs}, {"rungs", rungs}};
}

std::string format_sweep(const SweepResult &sweep) {
    std::ostringstream out;
    out << "Shots      Min similarity   Max similarity\n";
    for (size_t k = 0; k < sweep.ladder.size(); k++) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-10llu %14.3f%% %15.3f%%\n", static_cast<unsigned long long>(sweep.ladder[k]),
                      sweep.min_similarity[k], sweep.max_similarity[k]);
        out << line;
    }
    return out.str();
}

json counts_to_json(const Counts &counts, const std::string &device, const std::string &circuit_id, int level) {
    return {
        {"schema", "counts-v1"},
        {"device", device},
        {"circuit_id", circuit_id},
        {"opt_level", level},
        {"shots", counts.shots},
        {"counts", counts.counts},
    };
}

ImportedCounts counts_from_json(const json &j, std::optional<size_t> expected_width) {
    if (!j.is_object()) {
        schema_error("counts file must be a JSON object");
    }
    if (as_string(require(j, "schema", "counts"), "schema") != "counts-v1") {
        schema_error("unsupported counts schema '" + j["schema"].get<std::string>() + "'");
    }
    ImportedCounts out;
    out.device = as_string(require(j, "device", "counts"), "device");
    out.circuit_id = as_string(require(j, "circuit_id", "counts"), "circuit_id");
    uint64_t level = as_count(require(j, "opt_level", "counts"), "opt_level");
    if (level > 3) {
        schema_error("opt_level must be in 0..3");
    }
    out.opt_level = static_cast<int>(level);
    uint64_t shots = as_count(require(j, "shots", "counts"), "shots");
    const json &counts = require(j, "counts", "counts");
    if (!counts.is_object()) {
        schema_error("counts must be an object of bitstring -> count");
    }
    std::optional<size_t> width = expected_width;
    uint64_t total = 0;
    for (const auto &[key, value] : counts.items()) {
        if (key.empty() || key.find_first_not_of("01") != std::string::npos) {
            schema_error("outcome '" + key + "' is not a bitstring");
        }
        if (width && key.size() != *width) {
            schema_error("outcome '" + key + "' has " + std::to_string(key.size()) + " bits, expected " +
                         std::to_string(*width));
        }
        width = key.size();
        uint64_t c = as_count(value, "count for '" + key + "'");
        total += c;
        if (c > 0) {
            out.counts.counts[key] = c;
        }
    }
    if (total != shots) {
        throw Error(ErrorCode::CountSumMismatch,
                    "counts sum to " + std::to_string(total) + " but shots is " + std::to_string(shots));
    }
    out.counts.shots = shots;
    out.counts.num_qubits = width.value_or(0);
    return out;
}

ImportedCounts import_counts(const fs::path &path, std::optional<size_t> expected_width) {
    return counts_from_json(read_json(path), expected_width);
}

void write_text_file(const fs::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    f << text;
    if (!text.empty() && text.back() != '\n') {
        f << '\n';
    }
    if (!f) {
        throw Error(ErrorCode::Io, "write failed for " + path.string());
    }
}

ResultHistogram tiers_of(const std::vector<ExperimentRecord> &experiments) {
    std::vector<std::pair<std::string, double>> sims;
    for (const auto &e : experiments) {
        if (!e.error.empty()) {
            continue;
        }
        for (size_t j = 1; j < e.matrix.labels.size(); j++) {
            sims.emplace_back(e.device, e.matrix.values[0][j]);
        }
    }
    return group_results(sims);
}

SourceTally best_source_of(const std::vector<ExperimentRecord> &experiments) {
    std::vector<ExperimentScores> scores;
    for (const auto &e : experiments) {
        if (!e.error.empty() || e.matrix.labels.size() < 2) {
            continue;
        }
        ExperimentScores s{experiment_id(e), e.device, {}};
        for (size_t j = 1; j < e.matrix.labels.size(); j++) {
            s.similarity[e.matrix.labels[j]] = e.matrix.values[0][j];
        }
        scores.push_back(std::move(s));
    }
    return best_source(scores);
}

MatrixReport run_matrix(const ExperimentSpec &spec, const fs::path &out_dir) {
    spec.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());
    }

    MatrixReport report;
    json bundle_experiments = json::array();
    json bundle_sweeps = json::array();
    uint64_t job = 0;

    for (size_t di = 0; di < spec.devices.size(); di++) {
        const DeviceSpec &device = spec.devices[di];
        const fs::path device_dir = out_dir / device.name;
        fs::create_directories(device_dir, ec);
        if (ec) {
            throw Error(ErrorCode::Io, "cannot create " + device_dir.string() + ": " + ec.message());
        }

        std::vector<NoiseModel> models;
        std::optional<Error> device_error;
        try {
            CalibrationTable table = load_calibration(device.csv, device.name);
            for (const auto &w : table.warnings) {
                report.warnings.push_back(device.name + ": " + w);
            }
            CouplingReconstruction rec = reconstruct_coupling(table);
            for (const auto &w : rec.warnings) {
                report.warnings.push_back(device.name + ": " + w);
            }
            for (const auto &v : spec.variants) {
                models.push_back(build_noise_model(table, rec.map, v.options));
                for (const auto &w : models.back().warnings) {
                    report.warnings.push_back(device.name + "/" + v.name + ": " + w);
                }
            }
        } catch (const Error &e) {
            device_error = e;
            report.warnings.push_back(device.name + ": " + e.what());
        }

        for (size_t ci = 0; ci < spec.circuits.size(); ci++) {
            const CircuitSpec &cs = spec.circuits[ci];
            std::optional<Circuit> circuit;
            std::optional<Error> circuit_error = device_error;
            if (!circuit_error) {
                try {
                    circuit = load_circuit(cs);
                } catch (const Error &e) {
                    circuit_error = e;
                }
            }
            for (int level : spec.levels) {
                const uint64_t job_seed = mix_seed(spec.seed, job++);
                ExperimentRecord rec{device.name, cs.id, level, {}, {}, {}};
                const std::string stem = cs.id + "_" + std::to_string(level);
                json entry = {{"device", device.name}, {"circuit", cs.id}, {"level", level}};
                try {
                    if (circuit_error) {
                        throw *circuit_error;
                    }
                    TranspiledCircuit tc = transpile(*circuit, models.front(), level, job_seed);
                    write_text_file(device_dir / ("circuit_" + stem + ".json"), dump(transpiled_to_json(tc)));

                    std::vector<std::pair<std::string, Counts>> sources;
                    for (const auto &h : spec.hardware_counts) {
                        if (h.device == device.name && h.circuit_id == cs.id && h.level == level) {
                            ImportedCounts hw = import_counts(h.path, circuit->num_qubits);
                            sources.emplace_back("hardware", std::move(hw.counts));
                            break;
                        }
                    }
                    for (size_t vi = 0; vi < spec.variants.size(); vi++) {
                        const VariantSpec &v = spec.variants[vi];
                        const uint64_t seed = mix_seed(job_seed, vi + 1);
                        Counts counts = v.engine == EngineKind::Density
                                            ? sample_counts(simulate_density(tc, models[vi]), spec.shots, seed)
                                            : simulate_trajectories(tc, models[vi], spec.shots, seed);
                        write_text_file(device_dir / ("counts_" + stem + "_" + v.name + ".json"),
                                        dump(counts_to_json(counts, device.name, cs.id, level)));
                        sources.emplace_back(v.name, std::move(counts));
                    }
                    rec.reference = sources.front().first;
                    rec.matrix = similarity_matrix(sources);

                    write_text_file(device_dir / ("matrix_" + stem + ".csv"), matrix_to_csv(rec.matrix));
                    json mj = matrix_to_json(rec.matrix);
                    mj["device"] = device.name;
                    mj["circuit"] = cs.id;
                    mj["level"] = level;
                    mj["reference"] = rec.reference;
                    mj["shots"] = spec.shots;
                    mj["status"] = "ok";
                    write_text_file(device_dir / ("matrix_" + stem + ".json"), dump(mj));
                    entry["status"] = "ok";
                    entry["matrix"] = device.name + "/matrix_" + stem + ".json";
                } catch (const Error &e) {
                    rec.error = e.what();
                    report.failures++;
                    report.warnings.push_back(experiment_id(rec) + ": FAILED " + e.what());
                    json mj = {{"device", device.name}, {"circuit", cs.id}, {"level", level}, {"status", "failed"},
                               {"error", error_json(e)}};
                    write_text_file(device_dir / ("matrix_" + stem + ".json"), dump(mj));
                    entry["status"] = "failed";
                    entry["error"] = error_json(e);
                    entry["matrix"] = device.name + "/matrix_" + stem + ".json";
                }
                bundle_experiments.push_back(entry);
                report.experiments.push_back(std::move(rec));
            }

            if (spec.sweep && !circuit_error) {
                const std::string file = device.name + "/sweep_" + cs.id + ".json";
                try {
                    const uint64_t sweep_seed = mix_seed(mix_seed(spec.seed, 0x5eedULL), di * spec.circuits.size() + ci);
                    TranspiledCircuit tc = transpile(*circuit, models.front(), spec.sweep->level, sweep_seed);
                    SweepResult sr = sweep_shots(tc, models.front(), spec.sweep->ladder, spec.sweep->repetitions,
                                                 mix_seed(sweep_seed, 1));
                    json sj = sweep_to_json(sr);
                    sj["device"] = device.name;
                    sj["circuit"] = cs.id;
                    sj["level"] = spec.sweep->level;
                    sj["variant"] = spec.variants.front().name;
                    sj["status"] = "ok";
                    write_text_file(out_dir / file, dump(sj));
                } catch (const Error &e) {
                    report.failures++;
                    report.warnings.push_back(device.name + "/" + cs.id + " sweep: FAILED " + e.what());
                    write_text_file(out_dir / file, dump({{"device", device.name}, {"circuit", cs.id},
                                                          {"status", "failed"}, {"error", error_json(e)}}));
                }
                bundle_sweeps.push_back(file);
            }
        }
    }

    report.tiers = tiers_of(report.experiments);
    report.best = best_source_of(report.experiments);
    write_text_file(out_dir / "tiers.json", dump(histogram_to_json(report.tiers)));
    write_text_file(out_dir / "best_source.json", dump(tally_to_json(report.best)));

    std::string log;
    for (const auto &w : report.warnings) {
        log += w + "\n";
    }
    write_text_file(out_dir / "warnings.log", log);

    json bundle = {
        {"seed", spec.seed},
        {"shots", spec.shots},
        {"experiments", bundle_experiments},
        {"sweeps", bundle_sweeps},
        {"failures", report.failures},
    };
    write_text_file(out_dir / "bundle.json", dump(bundle));
    return report;
}

std::string render_report(const fs::path &bundle_dir) {
    json bundle = read_json(bundle_dir / "bundle.json");
    std::vector<ExperimentRecord> records;
    std::ostringstream out;
    try {
        for (const auto &e : bundle.at("experiments")) {
            ExperimentRecord rec{e.at("device"), e.at("circuit"), e.at("level").get<int>(), {}, {}, {}};
            out << "== " << experiment_id(rec);
            if (e.at("status") != "ok") {
                rec.error = e.at("error").at("message").get<std::string>();
                out << "  FAILED: " << rec.error << "\n\n";
                records.push_back(std::move(rec));
                continue;
            }
            json mj = read_json(bundle_dir / e.at("matrix").get<std::string>());
            rec.reference = mj.at("reference");
            rec.matrix.labels = mj.at("labels").get<std::vector<std::string>>();
            rec.matrix.values = mj.at("values").get<std::vector<std::vector<double>>>();
            out << "  (reference: " << rec.reference << ")\n" << format_matrix(rec.matrix) << "\n";
            records.push_back(std::move(rec));
        }
        out << "== Similarity to reference by interval\n" << format_histogram(tiers_of(records)) << "\n";
        out << "== Most similar source per experiment\n" << format_tally(best_source_of(records));
        for (const auto &file : bundle.at("sweeps")) {
            json sj = read_json(bundle_dir / file.get<std::string>());
            out << "\n== Shot sweep " << sj.at("device").get<std::string>() << "/" << sj.at("circuit").get<std::string>();
            if (sj.at("status") != "ok") {
                out << "  FAILED\n";
                continue;
            }
            SweepResult sr;
            sr.repetitions = sj.at("repetitions");
            for (const auto &r : sj.at("rungs")) {
                sr.ladder.push_back(r.at("shots"));
                sr.min_similarity.push_back(r.at("min"));
                sr.max_similarity.push_back(r.at("max"));
                sr.mean_similarity.push_back(r.at("mean"));
            }
            out << " (" << sr.repetitions << " repetitions)\n" << format_sweep(sr);
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::SchemaMismatch, "malformed bundle: " + std::string(e.what()));
    }
    return out.str();
}

}  // namespace qtwin
