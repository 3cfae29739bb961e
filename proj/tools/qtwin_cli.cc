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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qtwin/bench.h"
#include "qtwin/calib.h"
#include "qtwin/circ.h"
#include "qtwin/error.h"
#include "qtwin/topo.h"
#include "qtwin/twin.h"
#include "qtwin/validate.h"
#include "qtwin/xpile.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qtwin;

namespace {

const char *kSchemaHelp = R"(
Files:
  spec JSON     {"seed": N, "devices": [{"name": "...", "csv": "path"}], "shots": N,
                 "circuits": [{"id": "...", "num_qubits": N, "depth": N, "seed": N} | {"id": "...", "file": "circuit.json"}],
                 "levels": [0, 1, 2, 3],
                 "variants": [{"name": "...", "depol": "direct|adjusted", "include_id_error": true,
                               "clamp": "clamp|reject", "noiseless": false, "engine": "density|trajectory"}],
                 "hardware_counts": [{"device": "...", "circuit_id": "...", "level": N, "path": "counts.json"}],
                 "sweep": {"ladder": [1000, 5000], "repetitions": 100, "level": 0}}
  counts JSON   {"schema": "counts-v1", "device": "...", "circuit_id": "...", "opt_level": 0..3,
                 "shots": N, "counts": {"01011": 1234}}
  circuit JSON  {"num_qubits": N, "ops": [{"label": "cx", "qubits": [0, 1], "params": []}], "measured": true}
)";

int fail(const std::string &code, const std::string &message, int status) {
    json j = {{"error", {{"code", code}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
    return status;
}

TwinOptions twin_options(bool adjusted) {
    TwinOptions options;
    options.depol_mode = adjusted ? DepolMode::Adjusted : DepolMode::Direct;
    return options;
}

json edges_json(const CouplingMap &map) {
    json edges = json::array();
    for (const auto &[a, b] : map.edges()) {
        edges.push_back({a, b});
    }
    return edges;
}

int cmd_inspect(const std::string &csv) {
    CalibrationTable table = load_calibration(csv);
    CouplingReconstruction rec = reconstruct_coupling(table);
    std::vector<std::string> warnings = table.warnings;
    warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());
    std::vector<int> down;
    for (const auto &q : table.qubits) {
        if (!q.operational) {
            down.push_back(q.index);
        }
    }
    json out = {
        {"device", table.device_name},
        {"num_qubits", table.num_qubits()},
        {"edges", edges_json(rec.map)},
        {"non_operational", down},
        {"warnings", warnings},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_build_twin(const std::string &csv, bool adjusted) {
    CalibrationTable table = load_calibration(csv);
    CouplingReconstruction rec = reconstruct_coupling(table);
    NoiseModel model = build_noise_model(table, rec.map, twin_options(adjusted));
    json channels = json::array();
    for (const auto &[key, channel] : model.gate_channels) {
        channels.push_back({
            {"gate", key.label},
            {"qubits", key.qubits},
            {"kraus_operators", channel.kraus().size()},
            {"process_fidelity", channel.process_fidelity()},
        });
    }
    json readout = json::object();
    for (const auto &[q, a] : model.readout) {
        readout[std::to_string(q)] = {{a.a[0][0], a.a[0][1]}, {a.a[1][0], a.a[1][1]}};
    }
    std::vector<std::string> warnings = table.warnings;
    warnings.insert(warnings.end(), rec.warnings.begin(), rec.warnings.end());
    warnings.insert(warnings.end(), model.warnings.begin(), model.warnings.end());
    json out = {
        {"device", model.source.device_name},
        {"csv_digest", model.source.csv_digest},
        {"options", model.source.options},
        {"basis_gates", model.basis_gates},
        {"operational", model.operational},
        {"coupling", edges_json(model.coupling)},
        {"gate_channels", channels},
        {"readout", readout},
        {"warnings", warnings},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_run(const std::string &spec_path, const std::string &out_dir) {
    ExperimentSpec spec = load_experiment_spec(spec_path);
    MatrixReport report = run_matrix(spec, out_dir);
    json out = {
        {"bundle", out_dir},
        {"experiments", report.experiments.size()},
        {"failures", report.failures},
        {"warnings", report.warnings.size()},
    };
    std::cout << out.dump(2) << "\n";
    if (report.failures > 0) {
        return fail("PartialFailure", std::to_string(report.failures) + " job(s) failed; see warnings.log", 1);
    }
    return 0;
}

int cmd_sweep(const std::string &csv, size_t qubits, size_t depth, uint64_t seed, int level,
              std::vector<uint64_t> ladder, size_t reps, bool adjusted, bool as_json) {
    CalibrationTable table = load_calibration(csv);
    CouplingReconstruction rec = reconstruct_coupling(table);
    NoiseModel model = build_noise_model(table, rec.map, twin_options(adjusted));
    Circuit circuit = random_circuit(qubits, depth, seed);
    TranspiledCircuit tc = transpile(circuit, model, level, seed);
    if (ladder.empty()) {
        ladder = default_ladder();
    }
    SweepResult sweep = sweep_shots(tc, model, ladder, reps, seed);
    if (as_json) {
        std::cout << sweep_to_json(sweep).dump(2) << "\n";
    } else {
        std::cout << format_sweep(sweep);
    }
    return 0;
}

int cmd_compare(const std::vector<std::string> &paths, const std::string &csv_out, bool as_json) {
    std::set<std::string> stems;
    bool unique = true;
    for (const auto &p : paths) {
        unique = unique && stems.insert(fs::path(p).stem().string()).second;
    }
    std::vector<std::pair<std::string, Counts>> sources;
    for (const auto &p : paths) {
        ImportedCounts c = import_counts(p);
        if (!sources.empty() && c.counts.num_qubits != sources.front().second.num_qubits) {
            throw Error(ErrorCode::SchemaMismatch, p + " has a different outcome width than " + paths.front());
        }
        sources.emplace_back(unique ? fs::path(p).stem().string() : p, std::move(c.counts));
    }
    SimilarityMatrix m = similarity_matrix(sources);
    std::string csv = matrix_to_csv(m);
    if (!csv_out.empty()) {
        write_text_file(csv_out, csv);
    }
    if (as_json) {
        std::cout << matrix_to_json(m).dump(2) << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noise-aware digital twins of superconducting devices from calibration CSV snapshots", "qtwin"};
    app.footer(kSchemaHelp);
    app.require_subcommand(1);

    std::string csv;
    bool adjusted = false;
    auto *build = app.add_subcommand("build-twin", "Build the noise model for a calibration CSV and print it as JSON");
    build->add_option("--csv", csv, "Calibration CSV")->required();
    build->add_flag("--adjusted", adjusted, "Subtract the relaxation contribution from the depolarizing strength");

    auto *inspect = app.add_subcommand("inspect", "Print the reconstructed coupling map and ingestion warnings");
    inspect->add_option("--csv", csv, "Calibration CSV")->required();

    std::string spec_path;
    std::string out_dir = "bundle";
    auto *run = app.add_subcommand("run", "Run an experiment matrix and write a report bundle");
    run->add_option("--spec", spec_path, "Experiment spec JSON")->required();
    run->add_option("--out", out_dir, "Bundle directory")->capture_default_str();

    size_t depth = 10;
    size_t qubits = 5;
    uint64_t seed = 0;
    int level = 0;
    std::vector<uint64_t> ladder;
    size_t reps = 100;
    bool as_json = false;
    auto *sweep = app.add_subcommand("sweep-shots", "Pairwise similarity spread of repeated samplings per shot budget");
    sweep->add_option("--csv", csv, "Calibration CSV")->required();
    sweep->add_option("--depth", depth, "Random circuit depth")->required();
    sweep->add_option("--seed", seed, "Circuit and sampling seed")->required();
    sweep->add_option("--qubits", qubits, "Random circuit width")->capture_default_str();
    sweep->add_option("--level", level, "Optimization level")->check(CLI::Range(0, 3))->capture_default_str();
    sweep->add_option("--ladder", ladder, "Shot budgets, strictly increasing")->delimiter(',');
    sweep->add_option("--reps", reps, "Repetitions per budget")->capture_default_str();
    sweep->add_flag("--adjusted", adjusted, "Use the adjusted depolarizing strength");
    sweep->add_flag("--json", as_json, "Print JSON instead of a table");

    std::vector<std::string> counts_paths;
    std::string csv_out;
    auto *compare = app.add_subcommand("compare", "Weighted Jaccard similarity matrix of counts files");
    compare->add_option("--counts", counts_paths, "counts-v1 JSON files")->required()->expected(1, -1);
    compare->add_option("--csv-out", csv_out, "Also write the matrix CSV here");
    compare->add_flag("--json", as_json, "Print JSON instead of CSV");

    std::string bundle_dir;
    auto *report = app.add_subcommand("report", "Render the tables of a report bundle");
    report->add_option("--bundle", bundle_dir, "Bundle directory written by run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << app.help();
        return fail("Usage", e.what(), 2);
    }

    try {
        if (*build) {
            return cmd_build_twin(csv, adjusted);
        }
        if (*inspect) {
            return cmd_inspect(csv);
        }
        if (*run) {
            return cmd_run(spec_path, out_dir);
        }
        if (*sweep) {
            return cmd_sweep(csv, qubits, depth, seed, level, ladder, reps, adjusted, as_json);
        }
        if (*compare) {
            return cmd_compare(counts_paths, csv_out, as_json);
        }
        if (*report) {
            std::cout << render_report(bundle_dir);
            return 0;
        }
    } catch (const Error &e) {
        return fail(std::string(error_code_name(e.code())), e.what(), 1);
    } catch (const std::exception &e) {
        return fail("Internal", e.what(), 1);
    }
    return 0;
}
