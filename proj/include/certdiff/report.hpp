// Copyright 2026 The certdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discrepancy-type table, yield line and modification-count histogram.
// Two discrepancies have the same type when their verdict vectors are equal.
#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "certdiff/discrepancy_db.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

struct ReportRow {
    VerdictVector pattern;
    std::size_t count = 0;
};

struct Report {
    std::vector<std::string> backends;
    std::size_t corpus_size = 0;
    std::size_t discrepancies = 0;
    double proportion = 0;
    std::vector<ReportRow> types;                  // first-seen order
    std::map<std::size_t, std::size_t> histogram; // modifications -> records
};

// `corpus_size` is the number of seeds processed; 0 reports the proportion
// against the record count itself.
inline Report make_report(const std::vector<DiscrepancyRecord> &records, const std::vector<std::string> &backends,
                          std::size_t corpus_size = 0) {
    Report r;
    r.backends = backends;
    if (r.backends.empty() && !records.empty()) r.backends = records.front().backends;
    r.discrepancies = records.size();
    r.corpus_size = corpus_size == 0 ? records.size() : corpus_size;
    r.proportion = r.corpus_size == 0 ? 0.0 : static_cast<double>(r.discrepancies) / static_cast<double>(r.corpus_size);
    for (const auto &rec : records) {
        auto it = std::find_if(r.types.begin(), r.types.end(), [&](const ReportRow &row) { return row.pattern == rec.verdicts; });
        if (it == r.types.end()) {
            r.types.push_back({rec.verdicts, 1});
        } else {
            ++it->count;
        }
        ++r.histogram[rec.trace.actions.size()];
    }
    return r;
}

inline std::string render_text(const Report &r) {
    std::ostringstream out;
    out << "Discrepancy types\n";
    out << "  #   count  ";
    for (const auto &b : r.backends) out << b << "  ";
    out << '\n';
    std::size_t n = 0;
    for (const auto &row : r.types) {
        char head[32];
        std::snprintf(head, sizeof head, "  %-3zu %5zu  ", ++n, row.count);
        out << head;
        for (std::size_t i = 0; i < row.pattern.size(); ++i) {
            const std::size_t width = i < r.backends.size() ? r.backends[i].size() : 3;
            std::string cell = std::to_string(row.pattern[i]);
            if (cell.size() < width) cell.insert(0, width - cell.size(), ' ');
            out << cell << "  ";
        }
        out << '\n';
    }
    if (r.types.empty()) out << "  (none)\n";
    char line[160];
    std::snprintf(line, sizeof line, "\nCorpus size  Discrepancies  Proportion\n%11zu  %13zu  %9.1f%%\n", r.corpus_size,
                  r.discrepancies, 100.0 * r.proportion);
    out << line;
    out << "\nModifications  Records\n";
    for (const auto &[mods, count] : r.histogram) {
        std::snprintf(line, sizeof line, "%13zu  %7zu\n", mods, count);
        out << line;
    }
    return out.str();
}

// Machine-readable form: one JSON object per line.
inline std::string render_jsonl(const Report &r) {
    std::ostringstream out;
    out << nlohmann::json{{"record", "summary"},
                          {"format", 1},
                          {"backends", r.backends},
                          {"corpus_size", r.corpus_size},
                          {"discrepancies", r.discrepancies},
                          {"proportion", r.proportion}}
               .dump()
        << '\n';
    for (const auto &row : r.types) {
        out << nlohmann::json{{"record", "type"}, {"pattern", row.pattern}, {"count", row.count}}.dump() << '\n';
    }
    for (const auto &[mods, count] : r.histogram) {
        out << nlohmann::json{{"record", "histogram"}, {"modifications", mods}, {"count", count}}.dump() << '\n';
    }
    return out.str();
}

} // namespace certdiff
