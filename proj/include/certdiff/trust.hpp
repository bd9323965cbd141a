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

// Issuers known to the simulated validators. Each entry stands in for a CA
// certificate: its name, the tag its mock signatures are keyed with, and the
// version of the certificate it would present in a chain.
#pragma once

#include <string>
#include <vector>

#include "certdiff/certificate.hpp"

namespace certdiff {

struct TrustAnchor {
    Name name;
    std::string signer_tag;
    std::int64_t version = 3;
    bool root = true; // false: an intermediate chaining to a root in the store
};

struct TrustStore {
    std::vector<TrustAnchor> anchors;

    [[nodiscard]] const TrustAnchor *find(const Name &name) const {
        for (const auto &a : anchors) {
            if (a.name == name) {
                return &a;
            }
        }
        return nullptr;
    }
};

inline constexpr std::string_view kRootCommonName = "certdiff Root CA";
inline constexpr std::string_view kRootTag = "certdiff-root";
inline constexpr std::string_view kLegacyCommonName = "certdiff Legacy Intermediate";
inline constexpr std::string_view kLegacyTag = "certdiff-legacy";

inline Name root_name() { return Name::make("DE", "certdiff", kRootCommonName); }
inline Name legacy_name() { return Name::make("DE", "certdiff", kLegacyCommonName); }

inline TrustStore default_trust_store() {
    TrustStore store;
    store.anchors.push_back({root_name(), std::string(kRootTag), 3, true});
    store.anchors.push_back({legacy_name(), std::string(kLegacyTag), 1, false});
    return store;
}

} // namespace certdiff
