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

// Certificate -> 101-integer state vector.
//
//   slot 0      version
//   slot 1, 2   issuer / subject country label
//   slot 3, 4   cmp(not_before, now), cmp(not_after, now)
//   slot 5      public key bits / 1024
//   slot 6      signature algorithm label
//   slot 7      serial class: 0 positive <= 20 octets, 1 zero, 2 negative,
//               3 longer than 20 octets
//   slot 8..100 31 tracked extension types x (exists, critical, value class)
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/certificate.hpp"
#include "certdiff/extensions.hpp"

namespace certdiff {

inline constexpr std::size_t kFeatureCount = 101;
inline constexpr std::size_t kExtensionBase = 8;
inline constexpr std::size_t kTrackedExtensionCount = 31;

using FeatureVector = std::array<std::int32_t, kFeatureCount>;

class MalformedRegistry : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Value classifiers. 0 means "exists/critical only".
enum class Classifier : int {
    kNone = 0,
    kBasicConstraints = 1,
    kKeyUsage = 2,
    kExtKeyUsage = 3,
    kSubjectAltName = 4,
    kAuthorityKeyId = 5,
    kSubjectKeyId = 6,
    kCrlDistributionPoints = 7,
    kCertificatePolicies = 8,
    kAuthorityInfoAccess = 9,
    kNameConstraints = 10,
};

struct TrackedExtension {
    std::string oid;
    std::size_t slot = 0; // first of the three slots
    Classifier classifier = Classifier::kNone;

    bool operator==(const TrackedExtension &) const = default;
};

inline std::vector<TrackedExtension> default_tracked_extensions() {
    const std::pair<std::string_view, Classifier> table[] = {
        {oids::kBasicConstraints, Classifier::kBasicConstraints},
        {oids::kKeyUsage, Classifier::kKeyUsage},
        {oids::kExtKeyUsage, Classifier::kExtKeyUsage},
        {oids::kSubjectAltName, Classifier::kSubjectAltName},
        {oids::kAuthorityKeyIdentifier, Classifier::kAuthorityKeyId},
        {oids::kSubjectKeyIdentifier, Classifier::kSubjectKeyId},
        {oids::kCrlDistributionPoints, Classifier::kCrlDistributionPoints},
        {oids::kCertificatePolicies, Classifier::kCertificatePolicies},
        {oids::kAuthorityInfoAccess, Classifier::kAuthorityInfoAccess},
        {oids::kNameConstraints, Classifier::kNameConstraints},
        {oids::kIssuerAltName, Classifier::kNone},
        {oids::kPolicyConstraints, Classifier::kNone},
        {oids::kPolicyMappings, Classifier::kNone},
        {oids::kInhibitAnyPolicy, Classifier::kNone},
        {oids::kFreshestCrl, Classifier::kNone},
        {oids::kSubjectDirectoryAttributes, Classifier::kNone},
        {oids::kSubjectInfoAccess, Classifier::kNone},
        {oids::kCtSctList, Classifier::kNone},
        {oids::kTlsFeature, Classifier::kNone},
        {oids::kOcspNoCheck, Classifier::kNone},
        {oids::kNetscapeCertType, Classifier::kNone},
        {oids::kNetscapeComment, Classifier::kNone},
        {oids::kMsCertTemplateName, Classifier::kNone},
        {oids::kMsCertTemplate, Classifier::kNone},
        {oids::kMsApplicationPolicies, Classifier::kNone},
        {oids::kQcStatements, Classifier::kNone},
        {oids::kLogotype, Classifier::kNone},
        {oids::kPrivateKeyUsagePeriod, Classifier::kNone},
        {oids::kCtPoison, Classifier::kNone},
        {oids::kBiometricInfo, Classifier::kNone},
        {oids::kEntrustVersionInfo, Classifier::kNone},
    };
    static_assert(std::size(table) == kTrackedExtensionCount);
    std::vector<TrackedExtension> out;
    for (std::size_t i = 0; i < std::size(table); ++i) {
        out.push_back({std::string(table[i].first), kExtensionBase + 3 * i, table[i].second});
    }
    return out;
}

// Per-type value classes; the highest class of each type means "malformed".
inline int classify_value(Classifier classifier, ByteView value) {
    switch (classifier) {
    case Classifier::kNone:
        return 0;
    case Classifier::kBasicConstraints: {
        // 1 CA true, 2 CA false, 3 malformed
        const auto bc = ext::decode_basic_constraints(value);
        if (!bc) return 3;
        return bc->ca ? 1 : 2;
    }
    case Classifier::kKeyUsage: {
        // 1 keyCertSign, 2 digitalSignature without keyCertSign, 3 other, 4 malformed
        const auto ku = ext::decode_key_usage(value);
        if (!ku) return 4;
        if (*ku & ext::kKeyCertSign) return 1;
        if (*ku & ext::kDigitalSignature) return 2;
        return 3;
    }
    case Classifier::kExtKeyUsage: {
        // 1 serverAuth only, 2 serverAuth among others, 3 anyEKU without
        // serverAuth, 4 other, 5 malformed
        const auto eku = ext::decode_oid_sequence(value);
        if (!eku) return 5;
        const bool server = std::find(eku->begin(), eku->end(), oids::kServerAuth) != eku->end();
        if (server) return eku->size() == 1 ? 1 : 2;
        if (std::find(eku->begin(), eku->end(), oids::kAnyExtendedKeyUsage) != eku->end()) return 3;
        return 4;
    }
    case Classifier::kSubjectAltName: {
        // 1 a single dNSName, 2 several names including a dNSName, 3 no dNSName, 4 malformed
        const auto names = ext::decode_general_names(value);
        if (!names) return 4;
        if (std::find(names->begin(), names->end(), 2) == names->end()) return 3;
        return names->size() == 1 ? 1 : 2;
    }
    case Classifier::kAuthorityKeyId: {
        // 1 keyIdentifier only, 2 keyIdentifier plus issuer/serial, 3 no keyIdentifier, 4 malformed
        const auto fields = ext::decode_tagged_fields(value);
        if (!fields || fields->empty() || fields->back() > 2) return 4;
        if (fields->front() != 0) return 3;
        return fields->size() == 1 ? 1 : 2;
    }
    case Classifier::kSubjectKeyId: {
        // 1 20 octets, 2 8 octets, 3 other length, 4 malformed
        const auto len = ext::decode_key_identifier(value);
        if (!len) return 4;
        if (*len == 20) return 1;
        if (*len == 8) return 2;
        return 3;
    }
    case Classifier::kCrlDistributionPoints: {
        // 1 one point with an http URI, 2 several points, 3 no http URI, 4 malformed
        const auto points = ext::decode_distribution_points(value);
        if (!points) return 4;
        if (points->size() > 1) return 2;
        return points->front().starts_with("http") ? 1 : 3;
    }
    case Classifier::kCertificatePolicies: {
        // 1 anyPolicy, 2 domain validated, 3 other, 4 malformed
        const auto policies = ext::decode_policy_like(value);
        if (!policies) return 4;
        if (std::find(policies->begin(), policies->end(), oids::kAnyPolicy) != policies->end()) return 1;
        if (std::find(policies->begin(), policies->end(), oids::kDomainValidated) != policies->end()) return 2;
        return 3;
    }
    case Classifier::kAuthorityInfoAccess: {
        // 1 OCSP only, 2 caIssuers only, 3 both, 4 other, 5 malformed
        const auto methods = ext::decode_policy_like(value);
        if (!methods) return 5;
        const bool ocsp = std::find(methods->begin(), methods->end(), oids::kOcsp) != methods->end();
        const bool ca = std::find(methods->begin(), methods->end(), oids::kCaIssuers) != methods->end();
        if (ocsp && ca) return 3;
        if (ocsp) return 1;
        if (ca) return 2;
        return 4;
    }
    case Classifier::kNameConstraints: {
        // 1 permitted only, 2 excluded only, 3 both, 4 malformed
        const auto fields = ext::decode_tagged_fields(value);
        if (!fields || fields->empty() || fields->back() > 1) return 4;
        if (fields->size() == 2) return 3;
        return fields->front() == 0 ? 1 : 2;
    }
    }
    return 0;
}

inline int compare_time(std::int64_t t, std::int64_t now) {
    if (t < now) return -1;
    if (t > now) return 1;
    return 0;
}

inline int serial_class(const SerialNumber &serial) {
    if (serial.zero()) return 1;
    if (serial.negative()) return 2;
    if (serial.octets() > 20) return 3;
    return 0;
}

struct LabelRegistry {
    std::map<std::string, int> countries;
    std::map<std::string, int> signature_algorithms;
    std::vector<TrackedExtension> extensions = default_tracked_extensions();

    bool operator==(const LabelRegistry &) const = default;

    [[nodiscard]] int country(const std::optional<std::string> &code) const {
        if (!code) return 0;
        const auto it = countries.find(*code);
        return it == countries.end() ? 0 : it->second;
    }

    [[nodiscard]] int signature_algorithm(const std::string &oid) const {
        const auto it = signature_algorithms.find(oid);
        return it == signature_algorithms.end() ? 0 : it->second;
    }

    [[nodiscard]] const TrackedExtension *tracked(std::string_view oid) const {
        for (const auto &t : extensions) {
            if (t.oid == oid) return &t;
        }
        return nullptr;
    }

    // Labels every country and inner signature algorithm seen in `certs` plus
    // the extra values, numbered 1.. in sorted order.
    static LabelRegistry build(std::span<const Certificate> certs, std::span<const std::string_view> extra_countries = {},
                               std::span<const std::string_view> extra_algorithms = {}) {
        std::set<std::string> cs(extra_countries.begin(), extra_countries.end());
        std::set<std::string> as(extra_algorithms.begin(), extra_algorithms.end());
        for (const auto &c : certs) {
            for (const Name *n : {&c.issuer, &c.subject}) {
                if (auto code = n->country()) cs.insert(*code);
            }
            as.insert(c.signature_algorithm.oid);
        }
        LabelRegistry reg;
        int next = 1;
        for (const auto &c : cs) reg.countries[c] = next++;
        next = 1;
        for (const auto &a : as) reg.signature_algorithms[a] = next++;
        return reg;
    }

    [[nodiscard]] std::string serialize() const {
        std::ostringstream out;
        out << "# certdiff label registry v1\n";
        for (const auto &[k, v] : countries) out << "country " << k << ' ' << v << '\n';
        for (const auto &[k, v] : signature_algorithms) out << "sigalg " << k << ' ' << v << '\n';
        for (const auto &t : extensions) {
            out << "extension " << t.oid << ' ' << t.slot << ' ' << static_cast<int>(t.classifier) << '\n';
        }
        return out.str();
    }

    static LabelRegistry parse(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        if (!std::getline(in, line) || line != "# certdiff label registry v1") {
            throw MalformedRegistry("missing registry header");
        }
        LabelRegistry reg;
        reg.extensions.clear();
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::istringstream fields(line);
            std::string kind, key;
            long long a = 0;
            if (!(fields >> kind >> key >> a)) {
                throw MalformedRegistry("line " + std::to_string(lineno) + ": expected '<kind> <key> <label>'");
            }
            if (kind == "country") {
                reg.countries[key] = static_cast<int>(a);
            } else if (kind == "sigalg") {
                reg.signature_algorithms[key] = static_cast<int>(a);
            } else if (kind == "extension") {
                int classifier = 0;
                if (!(fields >> classifier) || classifier < 0 || classifier > 10 ||
                    a < static_cast<long long>(kExtensionBase) || a + 3 > static_cast<long long>(kFeatureCount)) {
                    throw MalformedRegistry("line " + std::to_string(lineno) + ": bad extension entry");
                }
                reg.extensions.push_back({key, static_cast<std::size_t>(a), static_cast<Classifier>(classifier)});
            } else {
                throw MalformedRegistry("line " + std::to_string(lineno) + ": unknown entry kind '" + kind + "'");
            }
        }
        return reg;
    }
};

// Spec-level classifier over the default tracked list; untracked OIDs give 0.
inline int classify_extension_value(std::string_view oid, [[maybe_unused]] bool critical, ByteView value) {
    for (const auto &t : default_tracked_extensions()) {
        if (t.oid == oid) return classify_value(t.classifier, value);
    }
    return 0;
}

inline FeatureVector extract(const Certificate &cert, std::int64_t now, const LabelRegistry &reg) {
    FeatureVector v{};
    v[0] = static_cast<std::int32_t>(std::clamp<std::int64_t>(cert.version, INT32_MIN, INT32_MAX));
    v[1] = reg.country(cert.issuer.country());
    v[2] = reg.country(cert.subject.country());
    v[3] = compare_time(cert.not_before.seconds, now);
    v[4] = compare_time(cert.not_after.seconds, now);
    v[5] = static_cast<std::int32_t>(std::min<std::size_t>(cert.public_key_info.key_bits() / 1024, INT32_MAX));
    v[6] = reg.signature_algorithm(cert.signature_algorithm.oid);
    v[7] = serial_class(cert.serial);
    for (const auto &t : reg.extensions) {
        const Extension *e = cert.find_extension(t.oid);
        if (e == nullptr) continue;
        v[t.slot] = 1;
        v[t.slot + 1] = e->critical ? 1 : 0;
        v[t.slot + 2] = classify_value(t.classifier, e->value);
    }
    return v;
}

} // namespace certdiff
