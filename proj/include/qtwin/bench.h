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

#ifndef QTWIN_BENCH_H
#define QTWIN_BENCH_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtwin/engine.h"
#include "qtwin/twin.h"
#include "qtwin/validate.h"
#include "qtwin/xpile.h"

namespace qtwin {

struct DeviceSpec {
    std::string name;
    std::filesystem::path csv;
};

struct CircuitSpec {
    std::string id;
    size_t num_qubits = 0;
    size_t depth = 0;
    uint64_t seed = 0;
    // When set the circuit is read from this JSON file instead of generated.
    std::filesystem::path file;
};

enum class EngineKind {
    Density,
    Trajectory,
};

struct VariantSpec {
    std::string name;
    TwinOptions options;
    EngineKind engine = EngineKind::Density;
};

struct HardwareCountsSpec {
    std::string device;
    std::string circuit_id;
    int level = 0;
    std::filesystem::path path;
};

struct SweepSpec {
    std::vector<uint64_t> ladder;
    size_t repetitions = 100;
    int level = 0;
};

struct ExperimentSpec {
    uint64_t seed = 0;
    std::vector<DeviceSpec> devices;
    std::vector<CircuitSpec> circuits;
    std::vector<int> levels;
    uint64_t shots = 0;
    std::vector<VariantSpec> variants;
    std::vector<HardwareCountsSpec> hardware_counts;
    std::optional<SweepSpec> sweep;

    /// Throws SchemaMismatch on a malformed spec.
    void validate() const;
};

/// Relative paths inside the document resolve against `base_dir`.
ExperimentSpec parse_experiment_spec(const nlohmann::json &j, const std::filesystem::path &base_dir);
ExperimentSpec load_experiment_spec(const std::filesystem::path &path);

/// 1000, 5000, 10000, ..., 100000.
std::vector<uint64_t> default_ladder();

struct SweepResult {
    std::vector<uint64_t> ladder;
    size_t repetitions = 0;
    std::vector<double> min_similarity;
    std::vector<double> max_similarity;
    std::vector<double> mean_similarity;
};

/// Repetition r draws one stream of max(ladder) shots from `dist`; the counts at
/// each rung are prefixes of that stream.
SweepResult sweep_distribution(
    const OutcomeDistribution &dist, const std::vector<uint64_t> &ladder, size_t repetitions, uint64_t seed);

SweepResult sweep_shots(
    const TranspiledCircuit &tc, const NoiseModel &model, const std::vector<uint64_t> &ladder, size_t repetitions,
    uint64_t seed);

nlohmann::json sweep_to_json(const SweepResult &sweep);
std::string format_sweep(const SweepResult &sweep);

struct ImportedCounts {
    std::string device;
    std::string circuit_id;
    int opt_level = 0;
    Counts counts;
};

nlohmann::json counts_to_json(const Counts &counts, const std::string &device, const std::string &circuit_id, int level);
ImportedCounts counts_from_json(const nlohmann::json &j, std::optional<size_t> expected_width = std::nullopt);
ImportedCounts import_counts(const std::filesystem::path &path, std::optional<size_t> expected_width = std::nullopt);

struct ExperimentRecord {
    std::string device;
    std::string circuit_id;
    int level = 0;
    std::string reference;  // label every other source is scored against
    SimilarityMatrix matrix;
    std::string error;      // non-empty when the experiment failed
};

struct MatrixReport {
    std::vector<ExperimentRecord> experiments;
    ResultHistogram tiers;
    SourceTally best;
    std::vector<std::string> warnings;
    size_t failures = 0;
};

/// Runs every (device, circuit, level) experiment and writes the bundle to `out_dir`.
MatrixReport run_matrix(const ExperimentSpec &spec, const std::filesystem::path &out_dir);

/// Pure aggregation over finished experiments.
ResultHistogram tiers_of(const std::vector<ExperimentRecord> &experiments);
SourceTally best_source_of(const std::vector<ExperimentRecord> &experiments);

/// Tables rendered from a bundle written by run_matrix.
std::string render_report(const std::filesystem::path &bundle_dir);

/// Writes `text` with a trailing newline guaranteed.
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace qtwin

#endif
