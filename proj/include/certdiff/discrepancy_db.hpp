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

// Append-only store of discrepancy-triggering certificates.
//
// File layout: the line "certdiff-db 1", then one entry per record, each a
// decimal byte count on its own line followed by that many bytes of JSON
// and a newline. Certificate bytes are base64 inside the JSON. A sidecar
// "<db>.idx" holds one tab-separated line per record: byte offset, seed id,
// modification count, verdict vector.
//
// A record cut short by a crash is ignored on load with a warning.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "certdiff/actions.hpp"
#include "certdiff/corpus.hpp"
#include "certdiff/log.hpp"
#include "certdiff/pem.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

class InvalidRecord : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct DiscrepancyRecord {
    std::string seed_id;
    ActionTrace trace;
    Bytes certificate; // mutant DER
    VerdictVector verdicts;
    std::vector<std::string> backends;
    std::int64_t timestamp = 0;
    std::uint64_t campaign_seed = 0;

    bool operator==(const DiscrepancyRecord &) const = default;
};

inline constexpr std::string_view kDbHeader = "certdiff-db 1";

inline nlohmann::json record_to_json(const DiscrepancyRecord &r) {
    return nlohmann::json{
        {"seed_id", r.seed_id},
        {"actions", r.trace.actions},
        {"certificate", base64_encode(r.certificate)},
        {"verdicts", r.verdicts},
        {"backends", r.backends},
        {"timestamp", der::format_iso8601(r.timestamp)},
        {"campaign_seed", r.campaign_seed},
    };
}

inline DiscrepancyRecord record_from_json(const nlohmann::json &j) {
    DiscrepancyRecord r;
    r.seed_id = j.at("seed_id").get<std::string>();
    r.trace.seed_id = r.seed_id;
    r.trace.actions = j.at("actions").get<std::vector<ActionId>>();
    r.certificate = base64_decode(j.at("certificate").get<std::string>());
    r.verdicts = j.at("verdicts").get<VerdictVector>();
    r.backends = j.at("backends").get<std::vector<std::string>>();
    r.timestamp = der::parse_iso8601(j.at("timestamp").get<std::string>());
    r.campaign_seed = j.at("campaign_seed").get<std::uint64_t>();
    return r;
}

inline void validate_record(const DiscrepancyRecord &r) {
    if (!is_discrepancy(r.verdicts)) {
        throw InvalidRecord("verdict vector " + format_vector(r.verdicts) + " is not a discrepancy");
    }
    if (r.backends.size() != r.verdicts.size()) throw InvalidRecord("backend list and verdict vector differ in length");
    if (r.trace.seed_id != r.seed_id) throw InvalidRecord("trace seed id does not match record seed id");
    try {
        check_trace(r.trace);
    } catch (const InvalidTrace &e) {
        throw InvalidRecord(e.what());
    }
}

class DiscrepancyDb {
  public:
    explicit DiscrepancyDb(std::filesystem::path path) : path_(std::move(path)) {
        std::error_code ec;
        if (!std::filesystem::exists(path_, ec) || std::filesystem::file_size(path_, ec) == 0) {
            if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path(), ec);
            std::ofstream f(path_, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot create " + path_.string());
            f << kDbHeader << '\n';
            std::ofstream idx(index_path(), std::ios::trunc);
        } else {
            std::ifstream f(path_, std::ios::binary);
            std::string header;
            std::getline(f, header);
            if (header != kDbHeader) throw IoError(path_.string() + " is not a certdiff database");
        }
    }

    void record(const DiscrepancyRecord &r) {
        validate_record(r);
        const std::string body = record_to_json(r).dump();
        std::ofstream f(path_, std::ios::binary | std::ios::app);
        if (!f) throw IoError("cannot append to " + path_.string());
        f.seekp(0, std::ios::end);
        const auto offset = static_cast<std::uint64_t>(f.tellp());
        f << body.size() << '\n' << body << '\n';
        f.flush();
        if (!f) throw IoError("write failed: " + path_.string());
        std::ofstream idx(index_path(), std::ios::app);
        idx << offset << '\t' << r.seed_id << '\t' << r.trace.actions.size() << '\t' << format_vector(r.verdicts) << '\n';
    }

    [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path index_path() const { return path_.string() + ".idx"; }

  private:
    std::filesystem::path path_;
};

inline std::vector<DiscrepancyRecord> load_all(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path.string());
    std::string header;
    if (!std::getline(f, header) || header != kDbHeader) throw IoError(path.string() + " is not a certdiff database");
    std::vector<DiscrepancyRecord> out;
    std::string len_line;
    while (std::getline(f, len_line)) {
        if (len_line.empty()) continue;
        std::size_t len = 0;
        try {
            len = std::stoull(len_line);
        } catch (const std::exception &) {
            throw IoError(path.string() + ": corrupt length line after record " + std::to_string(out.size()));
        }
        std::string body(len, '\0');
        f.read(body.data(), static_cast<std::streamsize>(len));
        if (static_cast<std::size_t>(f.gcount()) != len) {
            log::warn(path.string() + ": ignoring truncated final record");
            break;
        }
        f.ignore(1);
        try {
            out.push_back(record_from_json(nlohmann::json::parse(body)));
        } catch (const std::exception &e) {
            throw IoError(path.string() + ": record " + std::to_string(out.size()) + ": " + e.what());
        }
    }
    return out;
}

} // namespace certdiff
