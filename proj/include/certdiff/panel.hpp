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

// The set of backends a campaign compares, and its configuration file.
//
//   {
//     "format": "certdiff-backends", "version": 1,
//     "trust": "trust.pem",            // substituted for {trust}
//     "parallelism": 4,                // concurrent external runs
//     "backends": [
//       {"id": "gnutls", "kind": "simulated", "profile": "gnutls-like"},
//       {"id": "custom", "kind": "simulated",
//        "profile": {"base": "strict", "accept_v4": true}},
//       {"id": "openssl", "kind": "external",
//        "command": ["openssl", "verify", "-CAfile", "{trust}", "{cert}"],
//        "cert_format": "pem", "timeout_seconds": 10,
//        "patterns": [{"contains": "certificate has expired", "code": -2},
//                     {"exit": 0, "regex": ": OK$", "code": 1}]}
//     ]
//   }
#pragma once

#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "certdiff/certificate.hpp"
#include "certdiff/external.hpp"
#include "certdiff/log.hpp"
#include "certdiff/profiles.hpp"
#include "certdiff/trust.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

class InsufficientBackends : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class BackendKind { kSimulated, kExternal, kCustom };

struct BackendSpec {
    std::string id;
    BackendKind kind = BackendKind::kSimulated;
    FlawProfile profile;   // simulated
    ExternalSpec external; // external
    // custom: in-process verdict function, used by tests and rigged setups
    std::function<int(const Certificate &, ByteView, std::int64_t)> custom;

    static BackendSpec simulated(FlawProfile p, std::string id = {}) {
        BackendSpec b;
        b.id = id.empty() ? p.name : std::move(id);
        b.kind = BackendKind::kSimulated;
        b.profile = std::move(p);
        return b;
    }
};

class Panel {
  public:
    Panel() = default;

    // Drops external backends whose utility is missing; at least two
    // backends must remain.
    Panel(std::vector<BackendSpec> backends, TrustStore trust = default_trust_store(), std::string trust_path = {},
          std::size_t parallelism = 1)
        : trust_(std::move(trust)), trust_path_(std::move(trust_path)), parallelism_(std::max<std::size_t>(parallelism, 1)) {
        for (auto &b : backends) {
            if (b.kind == BackendKind::kExternal) {
                if (b.external.command.empty() || !executable_available(b.external.command.front())) {
                    log::warn("backend " + b.id + " unavailable: " +
                              (b.external.command.empty() ? std::string("empty command") : b.external.command.front()) +
                              " not found");
                    continue;
                }
                ensure_catch_all(b.external.patterns);
            }
            backends_.push_back(std::move(b));
        }
        if (backends_.size() < 2) {
            throw InsufficientBackends("differential testing needs at least 2 available backends, have " +
                                       std::to_string(backends_.size()));
        }
    }

    [[nodiscard]] const std::vector<BackendSpec> &backends() const noexcept { return backends_; }
    [[nodiscard]] const TrustStore &trust() const noexcept { return trust_; }
    [[nodiscard]] std::size_t size() const noexcept { return backends_.size(); }
    [[nodiscard]] bool all_simulated() const {
        return std::all_of(backends_.begin(), backends_.end(),
                           [](const BackendSpec &b) { return b.kind != BackendKind::kExternal; });
    }

    [[nodiscard]] std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto &b : backends_) out.push_back(b.id);
        return out;
    }

    [[nodiscard]] int verify_one(const BackendSpec &b, const Certificate &c, ByteView der_bytes, std::int64_t now) const {
        switch (b.kind) {
        case BackendKind::kSimulated:
            return simulate_verify(b.profile, der_bytes, trust_, now);
        case BackendKind::kCustom:
            return b.custom(c, der_bytes, now);
        case BackendKind::kExternal:
            try {
                return external_verify(b.external, der_bytes, trust_path_);
            } catch (const BackendUnavailable &e) {
                log::warn("backend " + b.id + ": " + e.what());
                return verdict::kConnection;
            }
        }
        return verdict::kOther;
    }

    // One verdict per backend in configuration order. External backends run
    // concurrently, up to the parallelism bound.
    [[nodiscard]] VerdictVector verify_all(const Certificate &c, std::int64_t now) const {
        const Bytes der_bytes = encode_der(c);
        VerdictVector out(backends_.size(), verdict::kOther);
        std::vector<std::pair<std::size_t, std::future<int>>> pending;
        for (std::size_t i = 0; i < backends_.size(); ++i) {
            const auto &b = backends_[i];
            if (b.kind != BackendKind::kExternal || parallelism_ == 1) {
                out[i] = verify_one(b, c, der_bytes, now);
                continue;
            }
            if (pending.size() >= parallelism_) {
                out[pending.front().first] = pending.front().second.get();
                pending.erase(pending.begin());
            }
            pending.emplace_back(i, std::async(std::launch::async, [this, &b, &c, &der_bytes, now] {
                                     return verify_one(b, c, der_bytes, now);
                                 }));
        }
        for (auto &[i, f] : pending) out[i] = f.get();
        return out;
    }

    // For inputs that may not parse. Simulated backends report the parse
    // failure themselves; custom backends get -3 without being called.
    [[nodiscard]] VerdictVector verify_bytes(ByteView der_bytes, std::int64_t now) const {
        std::optional<Certificate> parsed;
        try {
            parsed = parse_der(der_bytes);
        } catch (const std::exception &) {
        }
        if (parsed) return verify_all(*parsed, now);
        VerdictVector out;
        for (const auto &b : backends_) {
            if (b.kind == BackendKind::kSimulated) {
                out.push_back(simulate_verify(b.profile, der_bytes, trust_, now));
            } else if (b.kind == BackendKind::kExternal) {
                out.push_back(verify_one(b, Certificate{}, der_bytes, now));
            } else {
                out.push_back(verdict::kParsing);
            }
        }
        return out;
    }

  private:
    std::vector<BackendSpec> backends_;
    TrustStore trust_;
    std::string trust_path_;
    std::size_t parallelism_ = 1;
};

inline Panel default_panel() {
    std::vector<BackendSpec> specs;
    for (auto &p : shipped_profiles()) specs.push_back(BackendSpec::simulated(p));
    return Panel(std::move(specs));
}

namespace detail {

    inline FlawProfile profile_from_json(const nlohmann::json &j) {
        if (j.is_string()) return profile_by_name(j.get<std::string>());
        if (!j.is_object()) throw InvalidConfig("profile must be a name or an object");
        FlawProfile p = profile_by_name(j.value("base", std::string("strict")));
        p.name = j.value("name", p.name);
        for (const auto &[key, value] : j.items()) {
            if (key == "base" || key == "name") continue;
            if (key == "time_linger_seconds") {
                p.time_linger_seconds = value.get<std::int64_t>();
            } else if (key == "local_utc_offset_seconds") {
                p.local_utc_offset_seconds = value.get<std::int64_t>();
            } else if (key == "time_linger") {
                throw InvalidConfig("use time_linger_seconds");
            } else {
                p = with_switch(p, key, value.get<bool>());
            }
        }
        return p;
    }

    inline OutputPattern pattern_from_json(const nlohmann::json &j) {
        OutputPattern p;
        for (const auto &[key, value] : j.items()) {
            if (key != "exit" && key != "contains" && key != "regex" && key != "code") {
                throw InvalidConfig("unknown pattern field '" + key + "'");
            }
        }
        if (j.contains("exit")) p.exit_status = j.at("exit").get<int>();
        if (j.contains("contains")) p.contains = j.at("contains").get<std::string>();
        if (j.contains("regex")) {
            p.regex = j.at("regex").get<std::string>();
            try {
                std::regex check(*p.regex);
            } catch (const std::regex_error &e) {
                throw InvalidConfig("bad regex '" + *p.regex + "': " + e.what());
            }
        }
        p.code = j.at("code").get<int>();
        if (!is_verdict_code(p.code)) throw InvalidConfig("pattern code " + std::to_string(p.code) + " is not a verdict code");
        return p;
    }

} // namespace detail

inline Panel panel_from_json(const nlohmann::json &j) {
    try {
        if (j.value("format", std::string()) != "certdiff-backends") throw InvalidConfig("format must be \"certdiff-backends\"");
        if (j.value("version", 0) != 1) throw InvalidConfig("unsupported backends config version");
        std::vector<BackendSpec> specs;
        for (const auto &b : j.at("backends")) {
            BackendSpec spec;
            spec.id = b.at("id").get<std::string>();
            const auto kind = b.at("kind").get<std::string>();
            if (kind == "simulated") {
                spec.kind = BackendKind::kSimulated;
                spec.profile = detail::profile_from_json(b.at("profile"));
            } else if (kind == "external") {
                spec.kind = BackendKind::kExternal;
                spec.external.command = b.at("command").get<std::vector<std::string>>();
                spec.external.cert_format = b.value("cert_format", std::string("pem"));
                if (spec.external.cert_format != "pem" && spec.external.cert_format != "der") {
                    throw InvalidConfig("cert_format must be pem or der");
                }
                spec.external.timeout_seconds = b.value("timeout_seconds", 10.0);
                for (const auto &p : b.value("patterns", nlohmann::json::array())) {
                    spec.external.patterns.push_back(detail::pattern_from_json(p));
                }
            } else {
                throw InvalidConfig("unknown backend kind '" + kind + "'");
            }
            specs.push_back(std::move(spec));
        }
        return Panel(std::move(specs), default_trust_store(), j.value("trust", std::string()),
                     j.value("parallelism", std::size_t{1}));
    } catch (const nlohmann::json::exception &e) {
        throw InvalidConfig(std::string("backends config: ") + e.what());
    } catch (const UnknownProfile &e) {
        throw InvalidConfig(std::string("backends config: ") + e.what());
    }
}

inline Panel load_panel(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw InvalidConfig("cannot read backends config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidConfig(path + ": " + e.what());
    }
    return panel_from_json(j);
}

} // namespace certdiff
