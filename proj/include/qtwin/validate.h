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

#ifndef QTWIN_VALIDATE_H
#define QTWIN_VALIDATE_H

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtwin/engine.h"

namespace qtwin {

/// 100 * sum_s min(x_s, y_s) / sum_s max(x_s, y_s) over the union of outcomes;
/// missing outcomes count as zero, two empty inputs give 100.
double weighted_jaccard(const Counts &x, const Counts &y);

/// Same formula on dense, index-aligned count vectors.
double weighted_jaccard(std::span<const uint64_t> x, std::span<const uint64_t> y);

struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // percentages, diagonal exactly 100
};

SimilarityMatrix similarity_matrix(const std::vector<std::pair<std::string, Counts>> &results);

// Ordered from worst to best so that comparisons follow similarity.
enum class Tier {
    Below,
    UsefullySimilar,  // >= 85
    CloseMatch,       // >= 90
    NearIdentical,    // >= 95
};

/// Lower bounds are inclusive: 95.0 is NearIdentical.
Tier classify_tier(double similarity);
std::string_view tier_name(Tier tier);

struct IntervalRow {
    Tier tier = Tier::Below;
    uint64_t total = 0;
    double total_pct = 0;
    double cumulative_pct = 0;
    std::map<std::string, uint64_t> by_device;
    std::map<std::string, double> pct_by_device;
    std::map<std::string, double> cumulative_by_device;
};

/// Similarity intervals from best to worst with per-device and total counts.
struct ResultHistogram {
    std::vector<IntervalRow> rows;
    uint64_t total = 0;
    std::map<std::string, uint64_t> device_totals;
};

ResultHistogram group_results(const std::vector<std::pair<std::string, double>> &sims);

struct ExperimentScores {
    std::string id;
    std::string device;
    std::map<std::string, double> similarity;  // source -> similarity to the reference
};

struct SourceTally {
    struct Winner {
        std::string id;
        std::string device;
        std::vector<std::string> sources;
        bool tie = false;
    };
    std::vector<Winner> winners;
    std::map<std::string, uint64_t> wins;
    std::map<std::string, std::map<std::string, uint64_t>> wins_by_device;
    size_t experiments = 0;
};

/// Credits the highest-scoring source of every experiment; exact ties credit every tied source.
SourceTally best_source(const std::vector<ExperimentScores> &experiments);

std::string matrix_to_csv(const SimilarityMatrix &m);
nlohmann::json matrix_to_json(const SimilarityMatrix &m);
nlohmann::json histogram_to_json(const ResultHistogram &h);
nlohmann::json tally_to_json(const SourceTally &t);

std::string format_matrix(const SimilarityMatrix &m);
std::string format_histogram(const ResultHistogram &h);
std::string format_tally(const SourceTally &t);

}  // namespace qtwin

#endif
