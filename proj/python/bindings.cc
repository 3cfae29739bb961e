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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "qtwin/bench.h"
#include "qtwin/calib.h"
#include "qtwin/circ.h"
#include "qtwin/engine.h"
#include "qtwin/error.h"
#include "qtwin/topo.h"
#include "qtwin/twin.h"
#include "qtwin/validate.h"
#include "qtwin/xpile.h"

namespace py = pybind11;
using namespace qtwin;

namespace {

// Circuits cross the boundary as JSON text; the Python package wraps this with the json module.
Circuit circuit_from_text(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::SchemaMismatch, e.what());
    }
    return circuit_from_json(j);
}

Counts counts_from_dict(const std::map<std::string, uint64_t> &d) {
    Counts c;
    for (const auto &[k, v] : d) {
        c.num_qubits = k.size();
        c.shots += v;
        if (v) {
            c.counts[k] = v;
        }
    }
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Calibration-driven noisy digital twins: ingestion, transpilation, simulation and comparison.";

    static py::exception<Error> exc(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error &e) {
            py::object err = py::handle(exc.ptr())(std::string(e.what()));
            err.attr("code") = std::string(error_code_name(e.code()));
            PyErr_SetObject(exc.ptr(), err.ptr());
        }
    });

    py::enum_<DepolMode>(m, "DepolMode").value("DIRECT", DepolMode::Direct).value("ADJUSTED", DepolMode::Adjusted);
    py::enum_<ClampPolicy>(m, "ClampPolicy").value("CLAMP", ClampPolicy::Clamp).value("REJECT", ClampPolicy::Reject);

    py::class_<TwinOptions>(m, "TwinOptions")
        .def(py::init<>())
        .def_readwrite("depol_mode", &TwinOptions::depol_mode)
        .def_readwrite("include_id_error", &TwinOptions::include_id_error)
        .def_readwrite("clamp_policy", &TwinOptions::clamp_policy)
        .def_readwrite("noiseless", &TwinOptions::noiseless);

    py::class_<CalibrationTable>(m, "CalibrationTable")
        .def_readonly("device_name", &CalibrationTable::device_name)
        .def_readonly("warnings", &CalibrationTable::warnings)
        .def_property_readonly("num_qubits", &CalibrationTable::num_qubits)
        .def("to_csv", [](const CalibrationTable &t) {
            return to_canonical_csv(t);
        });

    m.def("parse_calibration_csv", [](const std::string &text, const std::string &name) {
        return validate_table(parse_calibration_csv(text, name));
    }, py::arg("text"), py::arg("device_name"));
    m.def("load_calibration", &load_calibration, py::arg("path"), py::arg("device_name") = "");

    py::class_<CouplingMap>(m, "CouplingMap")
        .def_property_readonly("num_qubits", &CouplingMap::num_qubits)
        .def_property_readonly("edges", [](const CouplingMap &c) {
            return std::vector<std::pair<int, int>>(c.edges().begin(), c.edges().end());
        })
        .def("has_directed_edge", &CouplingMap::has_directed_edge);

    m.def("reconstruct_coupling", [](const CalibrationTable &t) {
        CouplingReconstruction r = reconstruct_coupling(t);
        return py::make_tuple(r.map, r.warnings);
    }, "Returns (coupling_map, warnings).");
    m.def("shortest_path", &shortest_path);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def_readonly("basis_gates", &NoiseModel::basis_gates)
        .def_readonly("coupling", &NoiseModel::coupling)
        .def_readonly("operational", &NoiseModel::operational)
        .def_readonly("warnings", &NoiseModel::warnings)
        .def_property_readonly("num_channels", [](const NoiseModel &n) {
            return n.gate_channels.size();
        })
        .def("process_fidelity", [](const NoiseModel &n, const std::string &label, const std::vector<int> &qubits) {
            const Channel *ch = n.gate_channel(label, qubits);
            return ch ? ch->process_fidelity() : 1.0;
        });

    m.def("build_noise_model", &build_noise_model, py::arg("table"), py::arg("coupling"),
          py::arg("options") = TwinOptions{});

    m.def("random_circuit", [](size_t n, size_t depth, uint64_t seed) {
        return circuit_to_json(random_circuit(n, depth, seed)).dump();
    }, py::arg("num_qubits"), py::arg("depth"), py::arg("seed"), "Circuit JSON text.");

    py::class_<TranspiledCircuit>(m, "TranspiledCircuit")
        .def_readonly("layout", &TranspiledCircuit::layout)
        .def_readonly("final_layout", &TranspiledCircuit::final_layout)
        .def_readonly("level", &TranspiledCircuit::level)
        .def_property_readonly("num_ops", [](const TranspiledCircuit &t) {
            return t.circuit.ops.size();
        })
        .def("to_json", [](const TranspiledCircuit &t) {
            return transpiled_to_json(t).dump();
        });

    m.def("transpile", [](const std::string &circuit, const NoiseModel &model, int level, uint64_t seed) {
        return transpile(circuit_from_text(circuit), model, level, seed);
    }, py::arg("circuit"), py::arg("model"), py::arg("level"), py::arg("seed") = 0);
    m.def("verify_equivalence", [](const std::string &circuit, const TranspiledCircuit &tc) {
        return verify_equivalence(circuit_from_text(circuit), tc);
    });

    m.def("simulate_density", [](const TranspiledCircuit &tc, const NoiseModel &model) {
        return simulate_density(tc, model).probs;
    }, "Exact outcome probabilities indexed with virtual qubit 0 as the least significant bit.");
    m.def("sample_counts", [](const std::vector<double> &probs, uint64_t shots, uint64_t seed) {
        OutcomeDistribution d;
        d.probs = probs;
        while ((size_t{1} << d.num_qubits) < probs.size()) {
            d.num_qubits++;
        }
        return sample_counts(d, shots, seed).counts;
    });
    m.def("simulate_trajectories", [](const TranspiledCircuit &tc, const NoiseModel &model, uint64_t shots, uint64_t seed) {
        return simulate_trajectories(tc, model, shots, seed).counts;
    });

    m.def("weighted_jaccard", [](const std::map<std::string, uint64_t> &a, const std::map<std::string, uint64_t> &b) {
        return weighted_jaccard(counts_from_dict(a), counts_from_dict(b));
    });
    m.def("similarity_matrix", [](const std::vector<std::pair<std::string, std::map<std::string, uint64_t>>> &results) {
        std::vector<std::pair<std::string, Counts>> in;
        for (const auto &[label, d] : results) {
            in.emplace_back(label, counts_from_dict(d));
        }
        SimilarityMatrix sm = similarity_matrix(in);
        return py::make_tuple(sm.labels, sm.values);
    }, "Returns (labels, values).");
    m.def("classify_tier", [](double s) {
        return std::string(tier_name(classify_tier(s)));
    });

    m.def("sweep_shots", [](const TranspiledCircuit &tc, const NoiseModel &model, std::vector<uint64_t> ladder,
                            size_t reps, uint64_t seed) {
        if (ladder.empty()) {
            ladder = default_ladder();
        }
        return sweep_to_json(sweep_shots(tc, model, ladder, reps, seed)).dump();
    }, py::arg("tc"), py::arg("model"), py::arg("ladder") = std::vector<uint64_t>{}, py::arg("repetitions") = 100,
       py::arg("seed") = 0, "Sweep result as JSON text.");

    m.def("run_matrix", [](const std::filesystem::path &spec, const std::filesystem::path &out) {
        MatrixReport r = run_matrix(load_experiment_spec(spec), out);
        return py::make_tuple(r.experiments.size(), r.failures);
    }, py::arg("spec"), py::arg("out_dir"), "Writes the report bundle; returns (experiments, failures).");
    m.def("render_report", &render_report);
}
