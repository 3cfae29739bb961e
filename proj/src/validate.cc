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

#include "qtwin/validate.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace qtwin {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

double pct(uint64_t part, uint64_t whole) {
    return whole ? 100.0 * static_cast<double>(part) / static_cast<double>(whole) : 0.0;
}

}  // namespace

double weighted_jaccard(const Counts &x, const Counts &y) {
    uint64_t mins = 0;
    uint64_t maxs = 0;
    auto xi = x.counts.begin();
    auto yi = y.counts.begin();
    while (xi != x.counts.end() || yi != y.counts.end()) {
        if (yi == y.counts.end() || (xi != x.counts.end() && xi->first < yi->first)) {
            maxs += xi->second;
            ++xi;
        } else if (xi == x.counts.end() || yi->first < xi->first) {
            maxs += yi->second;
            ++yi;
        } else {
            mins += std::min(xi->second, yi->second);
            maxs += std::max(xi->second, yi->second);
            ++xi;
            ++yi;
        }
    }
    return maxs ? 100.0 * static_cast<double>(mins) / static_cast<double>(maxs) : 100.0;
}

double weighted_jaccard(std::span<const uint64_t> x, std::span<const uint64_t> y) {
    uint64_t mins = 0;
    uint64_t maxs = 0;
    const size_t n = std::max(x.size(), y.size());
    for (size_t i = 0; i < n; i++) {
        uint64_t a = i < x.size() ? x[i] : 0;
        uint64_t b = i < y.size() ? y[i] : 0;
        mins += std::min(a, b);
        maxs += std::max(a, b);
    }
    return maxs ? 100.0 * static_cast<double>(mins) / static_cast<double>(maxs) : 100.0;
}

SimilarityMatrix similarity_matrix(const std::vector<std::pair<std::string, Counts>> &results) {
    SimilarityMatrix m;
    const size_t k = results.size();
    m.values.assign(k, std::vector<double>(k, 100.0));
    for (size_t i = 0; i < k; i++) {
        m.labels.push_back(results[i].first);
        for (size_t j = i + 1; j < k; j++) {
            double s = weighted_jaccard(results[i].second, results[j].second);
            m.values[i][j] = m.values[j][i] = s;
        }
    }
    return m;
}

Tier classify_tier(double similarity) {
    if (similarity >= 95.0) {
        return Tier::NearIdentical;
    }
    if (similarity >= 90.0) {
        return Tier::CloseMatch;
    }
    if (similarity >= 85.0) {
        return Tier::UsefullySimilar;
    }
    return Tier::Below;
}

std::string_view tier_name(Tier tier) {
    switch (tier) {
        case Tier::NearIdentical:
            return "NearIdentical";
        case Tier::CloseMatch:
            return "CloseMatch";
        case Tier::UsefullySimilar:
            return "UsefullySimilar";
        case Tier::Below:
            return "Below";
    }
    return "Below";
}

ResultHistogram group_results(const std::vector<std::pair<std::string, double>> &sims) {
    ResultHistogram h;
    for (Tier t : {Tier::NearIdentical, Tier::CloseMatch, Tier::UsefullySimilar, Tier::Below}) {
        IntervalRow row;
        row.tier = t;
        h.rows.push_back(row);
    }
    for (const auto &[device, s] : sims) {
        auto &row = h.rows[3 - static_cast<int>(classify_tier(s))];
        row.total++;
        row.by_device[device]++;
        h.device_totals[device]++;
        h.total++;
    }
    uint64_t running = 0;
    std::map<std::string, uint64_t> running_by_device;
    for (auto &row : h.rows) {
        running += row.total;
        row.total_pct = pct(row.total, h.total);
        row.cumulative_pct = pct(running, h.total);
        for (const auto &[device, total] : h.device_totals) {
            uint64_t c = row.by_device.count(device) ? row.by_device.at(device) : 0;
            row.by_device[device] = c;
            running_by_device[device] += c;
            row.pct_by_device[device] = pct(c, total);
            row.cumulative_by_device[device] = pct(running_by_device[device], total);
        }
    }
    return h;
}

SourceTally best_source(const std::vector<ExperimentScores> &experiments) {
    SourceTally t;
    t.experiments = experiments.size();
    for (const auto &e : experiments) {
        SourceTally::Winner w{e.id, e.device, {}, false};
        double best = -1;
        for (const auto &[source, s] : e.similarity) {
            best = std::max(best, s);
        }
        for (const auto &[source, s] : e.similarity) {
            if (s == best) {
                w.sources.push_back(source);
                t.wins[source]++;
                t.wins_by_device[source][e.device]++;
            } else {
                t.wins.try_emplace(source, 0);
            }
        }
        w.tie = w.sources.size() > 1;
        t.winners.push_back(std::move(w));
    }
    return t;
}

std::string matrix_to_csv(const SimilarityMatrix &m) {
    std::ostringstream out;
    for (const auto &l : m.labels) {
        out << "," << csv_escape(l);
    }
    out << "\n";
    for (size_t i = 0; i < m.labels.size(); i++) {
        out << csv_escape(m.labels[i]);
        for (double v : m.values[i]) {
            out << "," << fixed(v, 3);
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json matrix_to_json(const SimilarityMatrix &m) {
    return {{"labels", m.labels}, {"values", m.values}};
}

nlohmann::json histogram_to_json(const ResultHistogram &h) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : h.rows) {
        rows.push_back({
            {"interval", tier_name(r.tier)},
            {"count", r.total},
            {"percentage", r.total_pct},
            {"cumulative_percentage", r.cumulative_pct},
            {"count_by_device", r.by_device},
            {"percentage_by_device", r.pct_by_device},
            {"cumulative_by_device", r.cumulative_by_device},
        });
    }
    return {{"total", h.total}, {"device_totals", h.device_totals}, {"intervals", rows}};
}

nlohmann::json tally_to_json(const SourceTally &t) {
    nlohmann::json winners = nlohmann::json::array();
    for (const auto &w : t.winners) {
        winners.push_back({{"experiment", w.id}, {"device", w.device}, {"sources", w.sources}, {"tie", w.tie}});
    }
    return {{"experiments", t.experiments}, {"wins", t.wins}, {"wins_by_device", t.wins_by_device}, {"winners", winners}};
}

std::string format_matrix(const SimilarityMatrix &m) {
    size_t width = 8;
    for (const auto &l : m.labels) {
        width = std::max(width, l.size());
    }
    std::ostringstream out;
    auto pad = [&](const std::string &s) {
        return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
    };
    out << pad("");
    for (const auto &l : m.labels) {
        out << "  " << pad(l);
    }
    out << "\n";
    for (size_t i = 0; i < m.labels.size(); i++) {
        out << pad(m.labels[i]);
        for (double v : m.values[i]) {
            out << "  " << pad(fixed(v, 3) + "%");
        }
        out << "\n";
    }
    return out.str();
}

std::string format_histogram(const ResultHistogram &h) {
    static const char *kNames[] = {"Above 95%", "Between 95% and 90%", "Between 90% and 85%", "Below 85%"};
    std::ostringstream out;
    out << "Similarity interval       Count   Percentage   Cumulative\n";
    for (size_t i = 0; i < h.rows.size(); i++) {
        const auto &r = h.rows[i];
        char line[160];
        std::snprintf(line, sizeof(line), "%-24s %6llu %11s%% %11s%%\n", kNames[i],
                      static_cast<unsigned long long>(r.total), fixed(r.total_pct, 2).c_str(),
                      fixed(r.cumulative_pct, 2).c_str());
        out << line;
        for (const auto &[device, c] : r.by_device) {
            std::snprintf(line, sizeof(line), "  %-22s %6llu %11s%% %11s%%\n", device.c_str(),
                          static_cast<unsigned long long>(c), fixed(r.pct_by_device.at(device), 2).c_str(),
                          fixed(r.cumulative_by_device.at(device), 2).c_str());
            out << line;
        }
    }
    return out.str();
}

std::string format_tally(const SourceTally &t) {
    std::ostringstream out;
    out << "Source                          Wins   By device\n";
    for (const auto &[source, wins] : t.wins) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-30s %3llu / %-3zu", source.c_str(), static_cast<unsigned long long>(wins), t.experiments);
        out << line;
        auto it = t.wins_by_device.find(source);
        if (it != t.wins_by_device.end()) {
            for (const auto &[device, n] : it->second) {
                out << "  " << device << ": " << n;
            }
        }
        out << "\n";
    }
    size_t ties = std::count_if(t.winners.begin(), t.winners.end(), [](const auto &w) {
        return w.tie;
    });
    if (ties) {
        out << ties << " experiment(s) ended in a tie; every tied source was credited.\n";
    }
    return out.str();
}

}  // namespace qtwin
