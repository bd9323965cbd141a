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

// Seed corpora: directory ingestion and synthetic generation.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/actions.hpp"
#include "certdiff/builder.hpp"
#include "certdiff/certificate.hpp"
#include "certdiff/pem.hpp"
#include "certdiff/rng.hpp"

namespace certdiff {

class EmptyCorpus : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Seed {
    std::string id;
    Bytes der;
    std::string source; // file path, or "gen:<kind>"
    Certificate cert;
};

struct SeedCorpus {
    std::vector<Seed> seeds;
    std::size_t excluded = 0;

    [[nodiscard]] std::size_t size() const noexcept { return seeds.size(); }
    [[nodiscard]] bool empty() const noexcept { return seeds.empty(); }

    [[nodiscard]] const Seed *find(std::string_view id) const {
        for (const auto &s : seeds) {
            if (s.id == id) return &s;
        }
        return nullptr;
    }

    [[nodiscard]] std::vector<Certificate> certificates() const {
        std::vector<Certificate> out;
        for (const auto &s : seeds) out.push_back(s.cert);
        return out;
    }
};

inline Bytes read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path.string());
    return Bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path &path, std::string_view data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

// Loads every .pem / .der / .crt / .cer file, sorted by file name. Files
// that do not parse are skipped and counted.
inline SeedCorpus ingest_dir(const std::filesystem::path &dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto &entry : std::filesystem::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pem" || ext == ".der" || ext == ".crt" || ext == ".cer") files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end(), [](const auto &a, const auto &b) { return a.filename() < b.filename(); });

    SeedCorpus corpus;
    std::map<std::string, int> stems;
    for (const auto &f : files) ++stems[f.stem().string()];
    for (const auto &f : files) {
        const Bytes raw = read_file(f);
        try {
            Certificate cert = parse_any(raw);
            Bytes der = encode_der(cert);
            const std::string stem = f.stem().string();
            corpus.seeds.push_back({stems[stem] > 1 ? f.filename().string() : stem, std::move(der), f.string(), std::move(cert)});
        } catch (const std::exception &) {
            ++corpus.excluded;
        }
    }
    if (corpus.empty()) {
        throw EmptyCorpus("no parseable certificates in " + dir.string() + " (" + std::to_string(corpus.excluded) +
                          " excluded)");
    }
    return corpus;
}

// Seed kinds and their weights in percent.
struct MixEntry {
    std::string_view kind;
    int weight;
};

inline const std::vector<MixEntry> &mix_table(std::string_view mix) {
    static const std::vector<MixEntry> kDefault = {
        {"standard", 70},       {"v1", 8},          {"near-year-expiry", 5}, {"expired", 5},
        {"just-expired", 2},    {"legacy-issued", 2}, {"not-yet-valid", 2},  {"weak-sha1", 3},
        {"unknown-issuer", 3},
    };
    static const std::vector<MixEntry> kStandard = {{"standard", 100}};
    if (mix == "default") return kDefault;
    if (mix == "standard") return kStandard;
    throw InvalidParams("unknown corpus mix '" + std::string(mix) + "' (expected default or standard)");
}

inline SeedParams params_for_kind(std::string_view kind, Rng &rng, std::int64_t now) {
    SeedParams p;
    p.reference_time = now;
    p.serial_octets = static_cast<std::size_t>(rng.between(8, 20));
    p.not_before_offset = -rng.between(1, 400) * kDay;
    p.not_after_offset = rng.between(30, 800) * kDay;
    const double k = rng.uniform();
    p.key_bits = k < 0.7 ? 2048 : (k < 0.85 ? 3072 : 4096);
    const double a = rng.uniform();
    if (a < 0.1) {
        p.key_algorithm = std::string(oids::kEcPublicKey);
        p.key_bits = 256;
        p.signature_algorithm = std::string(oids::kEcdsaWithSha256);
    } else if (a < 0.2) {
        p.signature_algorithm = std::string(oids::kSha384WithRsa);
    } else if (a < 0.3) {
        p.signature_algorithm = std::string(oids::kSha512WithRsa);
    }
    const char *countries[] = {"FR", "DE", "GB", "JP", "BR", "IN", "NL", "SE"};
    p.subject_country = countries[rng.below(std::size(countries))];

    using namespace std::string_literals;
    const std::vector<std::vector<std::string>> ext_sets = {
        {std::string(oids::kBasicConstraints), std::string(oids::kKeyUsage)},
        {std::string(oids::kBasicConstraints), std::string(oids::kKeyUsage), std::string(oids::kExtKeyUsage),
         std::string(oids::kSubjectAltName)},
        {std::string(oids::kBasicConstraints), std::string(oids::kKeyUsage), std::string(oids::kExtKeyUsage),
         std::string(oids::kSubjectAltName), std::string(oids::kAuthorityKeyIdentifier),
         std::string(oids::kSubjectKeyIdentifier)},
        {std::string(oids::kBasicConstraints), std::string(oids::kKeyUsage), std::string(oids::kExtKeyUsage),
         std::string(oids::kSubjectAltName), std::string(oids::kAuthorityKeyIdentifier),
         std::string(oids::kSubjectKeyIdentifier), std::string(oids::kCrlDistributionPoints),
         std::string(oids::kCertificatePolicies), std::string(oids::kAuthorityInfoAccess)},
        {std::string(oids::kSubjectAltName), std::string(oids::kExtKeyUsage), std::string(oids::kPrivateTestExtension)},
    };
    p.extensions = ext_sets[rng.below(ext_sets.size())];

    if (kind == "v1") {
        p.version = 1;
        p.extensions.clear();
    } else if (kind == "near-year-expiry") {
        p.not_after_offset = kYear - 12 * 3600;
    } else if (kind == "expired") {
        p.not_before_offset = -800 * kDay;
        p.not_after_offset = -rng.between(60, 400) * kDay;
    } else if (kind == "just-expired") {
        p.not_before_offset = -300 * kDay;
        p.not_after_offset = -rng.between(2, 14) * 3600;
    } else if (kind == "legacy-issued") {
        p.issuer_common_name = std::string(kLegacyCommonName);
        p.signer_tag = std::string(kLegacyTag);
    } else if (kind == "not-yet-valid") {
        p.not_before_offset = 4 * 3600;
        p.not_after_offset = 400 * kDay;
    } else if (kind == "weak-sha1") {
        p.key_algorithm = std::string(oids::kRsaEncryption);
        p.key_bits = 2048;
        p.signature_algorithm = std::string(oids::kSha1WithRsa);
    } else if (kind == "unknown-issuer") {
        p.issuer_country = "US";
        p.issuer_organization = "Unlisted Trust Services";
        p.issuer_common_name = "Unlisted Issuing CA";
        p.signer_tag = "unlisted";
    }
    return p;
}

inline SeedCorpus generate_corpus(std::size_t n, std::uint64_t rng_seed, std::string_view mix = "default",
                                  std::int64_t now = kReferenceTime) {
    if (n == 0) throw EmptyCorpus("requested an empty synthetic corpus");
    const auto &table = mix_table(mix);
    int total = 0;
    for (const auto &e : table) total += e.weight;
    Rng rng(rng_seed);
    SeedCorpus corpus;
    for (std::size_t i = 0; i < n; ++i) {
        auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
        std::string_view kind = table.back().kind;
        for (const auto &e : table) {
            if (pick < e.weight) {
                kind = e.kind;
                break;
            }
            pick -= e.weight;
        }
        Rng local = rng.fork();
        const SeedParams params = params_for_kind(kind, local, now);
        Certificate cert = build_synthetic(params, local.next());
        char id[64];
        std::snprintf(id, sizeof id, "gen-%llu-%05zu", static_cast<unsigned long long>(rng_seed), i);
        Bytes der = encode_der(cert);
        corpus.seeds.push_back({id, std::move(der), "gen:" + std::string(kind), std::move(cert)});
    }
    return corpus;
}

inline void write_corpus(const SeedCorpus &corpus, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto &s : corpus.seeds) write_file(dir / (s.id + ".pem"), pem_encode(s.der));
}

inline Certificate replay(const SeedCorpus &corpus, const ActionTrace &trace, std::int64_t now = kReferenceTime) {
    const Seed *seed = corpus.find(trace.seed_id);
    if (seed == nullptr) throw UnknownSeed("seed '" + trace.seed_id + "' is not in the corpus");
    return replay(seed->cert, trace, now);
}

} // namespace certdiff
