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

// Simulated validators: one strict reference validator whose individual
// checks can be relaxed by flaw switches.
//
// Checks run in this order; each produces at most one finding:
//
//   parse       DER, plus structure of basicConstraints, keyUsage,
//               extKeyUsage, subjectAltName, nameConstraints        -3
//   version     version in {1,2,3}; no extensions below v3           -4
//   validity    now within [not_before, not_after], widened by linger -2
//   serial      positive, at most 20 octets                          -15
//   signature   algorithm strength and consistency                   -5
//               mock signature under the issuer's tag                -6
//   issuer      non-empty names                                      -7
//               issuer known, self-issued untrusted, v1/v2 chain  -1 -12 -11
//   extension   duplicates and other-extension structure              -14
//               unknown critical extension                           -10
//               basicConstraints consistency                          -9
//               keyUsage / extKeyUsage purpose                        -8
//
// first_error_only reports the first finding in check order. Otherwise the
// most severe finding wins: parse > version > signature > validity >
// serial > issuer > extension.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/certificate.hpp"
#include "certdiff/extensions.hpp"
#include "certdiff/mock_sign.hpp"
#include "certdiff/trust.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

struct FlawProfile {
    std::string name = "strict";
    std::int64_t time_linger_seconds = 0;
    bool use_local_time_not_gmt = false;
    std::int64_t local_utc_offset_seconds = 8 * 3600;
    bool accept_v1_with_v3_ext = false;
    bool accept_v2_with_v3_ext = false;
    bool accept_v4 = false;
    bool accept_v1v2_intermediate = false;
    bool accept_negative_serial = false; // any non-positive serial
    bool accept_long_serial = false;
    bool first_error_only = false;
    bool ignore_signature = false;

    bool operator==(const FlawProfile &) const = default;
};

class UnknownProfile : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Switches that only ever widen what a profile accepts.
inline constexpr std::array<std::string_view, 8> kAcceptanceSwitches = {
    "time_linger", "accept_v1_with_v3_ext", "accept_v2_with_v3_ext", "accept_v4",
    "accept_v1v2_intermediate", "accept_negative_serial", "accept_long_serial", "ignore_signature",
};

inline bool switch_enabled(const FlawProfile &p, std::string_view sw) {
    if (sw == "time_linger") return p.time_linger_seconds > 0;
    if (sw == "use_local_time_not_gmt") return p.use_local_time_not_gmt;
    if (sw == "accept_v1_with_v3_ext") return p.accept_v1_with_v3_ext;
    if (sw == "accept_v2_with_v3_ext") return p.accept_v2_with_v3_ext;
    if (sw == "accept_v4") return p.accept_v4;
    if (sw == "accept_v1v2_intermediate") return p.accept_v1v2_intermediate;
    if (sw == "accept_negative_serial") return p.accept_negative_serial;
    if (sw == "accept_long_serial") return p.accept_long_serial;
    if (sw == "first_error_only") return p.first_error_only;
    if (sw == "ignore_signature") return p.ignore_signature;
    throw UnknownProfile("unknown flaw switch '" + std::string(sw) + "'");
}

inline FlawProfile with_switch(FlawProfile p, std::string_view sw, bool on) {
    if (sw == "time_linger") {
        p.time_linger_seconds = on ? 86400 : 0;
    } else if (sw == "use_local_time_not_gmt") {
        p.use_local_time_not_gmt = on;
    } else if (sw == "accept_v1_with_v3_ext") {
        p.accept_v1_with_v3_ext = on;
    } else if (sw == "accept_v2_with_v3_ext") {
        p.accept_v2_with_v3_ext = on;
    } else if (sw == "accept_v4") {
        p.accept_v4 = on;
    } else if (sw == "accept_v1v2_intermediate") {
        p.accept_v1v2_intermediate = on;
    } else if (sw == "accept_negative_serial") {
        p.accept_negative_serial = on;
    } else if (sw == "accept_long_serial") {
        p.accept_long_serial = on;
    } else if (sw == "first_error_only") {
        p.first_error_only = on;
    } else if (sw == "ignore_signature") {
        p.ignore_signature = on;
    } else {
        throw UnknownProfile("unknown flaw switch '" + std::string(sw) + "'");
    }
    return p;
}

inline FlawProfile strict_profile() { return FlawProfile{}; }

// Caricatures of six libraries' file-mode behavior. None of them checks the
// mock signature.
inline std::vector<FlawProfile> shipped_profiles() {
    std::vector<FlawProfile> out;
    auto lenient_x509 = [](std::string name) {
        FlawProfile p;
        p.name = std::move(name);
        p.accept_v1_with_v3_ext = true;
        p.accept_v2_with_v3_ext = true;
        p.accept_v1v2_intermediate = true;
        p.accept_v4 = true;
        p.accept_negative_serial = true;
        p.accept_long_serial = true;
        p.first_error_only = true;
        p.ignore_signature = true;
        return p;
    };
    out.push_back(lenient_x509("gnutls-like"));
    {
        FlawProfile p;
        p.name = "matrixssl-like";
        p.time_linger_seconds = 86400;
        p.use_local_time_not_gmt = true;
        p.accept_v2_with_v3_ext = true;
        p.accept_v1v2_intermediate = true;
        p.first_error_only = true;
        p.ignore_signature = true;
        out.push_back(p);
    }
    {
        FlawProfile p;
        p.name = "mbedtls-like";
        p.use_local_time_not_gmt = true;
        p.ignore_signature = true;
        out.push_back(p);
    }
    out.push_back(lenient_x509("nss-like"));
    out.push_back(lenient_x509("openssl-like"));
    {
        FlawProfile p;
        p.name = "wolfssl-like";
        p.accept_v4 = true;
        p.first_error_only = true;
        p.ignore_signature = true;
        out.push_back(p);
    }
    return out;
}

inline FlawProfile profile_by_name(std::string_view name) {
    if (name == "strict") return strict_profile();
    for (const auto &p : shipped_profiles()) {
        if (p.name == name) return p;
    }
    throw UnknownProfile("unknown profile '" + std::string(name) + "'");
}

enum class Stage { kParse, kVersion, kValidity, kSerial, kSignature, kIssuer, kExtension };

inline int severity_rank(Stage s) {
    switch (s) {
    case Stage::kParse: return 0;
    case Stage::kVersion: return 1;
    case Stage::kSignature: return 2;
    case Stage::kValidity: return 3;
    case Stage::kSerial: return 4;
    case Stage::kIssuer: return 5;
    case Stage::kExtension: return 6;
    }
    return 7;
}

struct Finding {
    Stage stage;
    int code;
    std::string reason;
};

namespace detail {

    inline bool known_signature_algorithm(std::string_view oid) {
        return oid == oids::kSha256WithRsa || oid == oids::kSha384WithRsa || oid == oids::kSha512WithRsa ||
               oid == oids::kEcdsaWithSha256 || oid == oids::kEcdsaWithSha384 || oid == oids::kEd25519;
    }

    inline std::string_view key_algorithm_for(std::string_view sig) {
        if (sig.starts_with("1.2.840.113549.1.1.")) return oids::kRsaEncryption;
        if (sig.starts_with("1.2.840.10045.4.")) return oids::kEcPublicKey;
        return sig; // Ed25519 uses the same OID for key and signature
    }

    inline bool recognized_extension(std::string_view oid) {
        return (ext::is_targeted(oid) && oid != oids::kPrivateTestExtension) || oid == oids::kIssuerAltName ||
               oid == oids::kPolicyConstraints || oid == oids::kPolicyMappings || oid == oids::kInhibitAnyPolicy ||
               oid == oids::kFreshestCrl || oid == oids::kSubjectDirectoryAttributes;
    }

    inline std::optional<Finding> check_parse_extensions(const Certificate &c) {
        for (const auto &e : c.extensions) {
            if (e.oid == oids::kBasicConstraints || e.oid == oids::kKeyUsage || e.oid == oids::kExtKeyUsage ||
                e.oid == oids::kSubjectAltName || e.oid == oids::kNameConstraints) {
                if (!ext::well_formed(e.oid, e.value)) {
                    return Finding{Stage::kParse, verdict::kParsing,
                                   "cannot decode " + std::string(ext::short_name(e.oid))};
                }
            }
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_version(const FlawProfile &p, const Certificate &c) {
        const auto v = c.version;
        if (v < 1 || v > 3) {
            if (v == 4 && p.accept_v4) return std::nullopt;
            return Finding{Stage::kVersion, verdict::kVersion, "unsupported version " + std::to_string(v)};
        }
        if (v < 3 && !c.extensions.empty()) {
            if ((v == 1 && p.accept_v1_with_v3_ext) || (v == 2 && p.accept_v2_with_v3_ext)) return std::nullopt;
            return Finding{Stage::kVersion, verdict::kVersion, "v" + std::to_string(v) + " certificate has extensions"};
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_validity(const FlawProfile &p, const Certificate &c, std::int64_t now) {
        const std::int64_t t = now + (p.use_local_time_not_gmt ? p.local_utc_offset_seconds : 0);
        if (c.not_before.seconds > c.not_after.seconds) {
            return Finding{Stage::kValidity, verdict::kValidityPeriod, "not_before is after not_after"};
        }
        if (t < c.not_before.seconds - p.time_linger_seconds) {
            return Finding{Stage::kValidity, verdict::kValidityPeriod, "not yet valid"};
        }
        if (t > c.not_after.seconds + p.time_linger_seconds) {
            return Finding{Stage::kValidity, verdict::kValidityPeriod, "expired"};
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_serial(const FlawProfile &p, const Certificate &c) {
        if ((c.serial.zero() || c.serial.negative()) && !p.accept_negative_serial) {
            return Finding{Stage::kSerial, verdict::kOther, "serial number is not positive"};
        }
        if (c.serial.octets() > 20 && !p.accept_long_serial) {
            return Finding{Stage::kSerial, verdict::kOther,
                           "serial number has " + std::to_string(c.serial.octets()) + " octets"};
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_signature(const FlawProfile &p, const Certificate &c, const TrustStore &trust) {
        const auto &alg = c.signature_algorithm.oid;
        if (c.signature_algorithm != c.outer_signature_algorithm) {
            return Finding{Stage::kSignature, verdict::kAlgorithm, "inner and outer signature algorithms differ"};
        }
        if (!known_signature_algorithm(alg)) {
            return Finding{Stage::kSignature, verdict::kAlgorithm, "weak or unknown signature algorithm " + alg};
        }
        if (c.public_key_info.algorithm.oid != key_algorithm_for(alg)) {
            return Finding{Stage::kSignature, verdict::kAlgorithm, "key type does not match signature algorithm"};
        }
        if (c.public_key_info.algorithm.oid == oids::kRsaEncryption && c.public_key_info.key_bits() < 1024) {
            return Finding{Stage::kSignature, verdict::kAlgorithm, "RSA key shorter than 1024 bits"};
        }
        if (!p.ignore_signature) {
            if (const TrustAnchor *a = trust.find(c.issuer)) {
                if (mock_sign(tbs_der(c), a->signer_tag) != c.signature_value) {
                    return Finding{Stage::kSignature, verdict::kSignature, "signature does not verify"};
                }
            }
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_issuer(const FlawProfile &p, const Certificate &c, const TrustStore &trust) {
        if (c.subject.empty() || c.issuer.empty()) {
            return Finding{Stage::kIssuer, verdict::kSubjectIssuer, "empty subject or issuer name"};
        }
        const TrustAnchor *a = trust.find(c.issuer);
        if (a == nullptr) {
            if (c.subject == c.issuer) {
                return Finding{Stage::kIssuer, verdict::kSelfSigned, "self-issued certificate is not trusted"};
            }
            return Finding{Stage::kIssuer, verdict::kUnknownIssuer, "issuer " + c.issuer.to_string() + " not trusted"};
        }
        if (!a->root && a->version < 3 && !p.accept_v1v2_intermediate) {
            return Finding{Stage::kIssuer, verdict::kChain, "issuer is a v" + std::to_string(a->version) + " intermediate"};
        }
        return std::nullopt;
    }

    inline std::optional<Finding> check_extensions(const Certificate &c) {
        auto other = [](std::string why) { return Finding{Stage::kExtension, verdict::kOtherExtension, std::move(why)}; };
        for (std::size_t i = 0; i < c.extensions.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (c.extensions[i].oid == c.extensions[j].oid) return other("duplicate extension " + c.extensions[i].oid);
            }
        }
        for (const auto &e : c.extensions) {
            if (e.critical && !recognized_extension(e.oid)) {
                return Finding{Stage::kExtension, verdict::kUnknownCriticalExtension,
                               "unknown critical extension " + e.oid};
            }
        }
        std::optional<ext::BasicConstraintsInfo> bc;
        if (const Extension *e = c.find_extension(oids::kBasicConstraints)) bc = ext::decode_basic_constraints(e->value);
        const bool is_ca = bc && bc->ca;
        for (const auto &e : c.extensions) {
            const std::string name(ext::short_name(e.oid));
            if (e.oid == oids::kAuthorityKeyIdentifier || e.oid == oids::kSubjectKeyIdentifier ||
                e.oid == oids::kCertificatePolicies || e.oid == oids::kCrlDistributionPoints ||
                e.oid == oids::kAuthorityInfoAccess) {
                if (!ext::well_formed(e.oid, e.value)) return other("malformed " + name);
            }
            if ((e.oid == oids::kAuthorityKeyIdentifier || e.oid == oids::kSubjectKeyIdentifier) && e.critical) {
                return other(name + " must not be critical");
            }
            if (e.oid == oids::kNameConstraints && !is_ca) return other("nameConstraints on a non-CA certificate");
        }
        if (bc && !bc->ca && bc->path_len) {
            return Finding{Stage::kExtension, verdict::kBasicConstraints, "pathLenConstraint without cA"};
        }
        std::optional<std::uint16_t> ku;
        if (const Extension *e = c.find_extension(oids::kKeyUsage)) ku = ext::decode_key_usage(e->value);
        if (ku && (*ku & ext::kKeyCertSign) && !is_ca) {
            return Finding{Stage::kExtension, verdict::kBasicConstraints, "keyCertSign without cA"};
        }
        if (ku && !(*ku & (ext::kDigitalSignature | ext::kKeyEncipherment))) {
            return Finding{Stage::kExtension, verdict::kKeyUsage, "keyUsage does not allow TLS server use"};
        }
        if (const Extension *e = c.find_extension(oids::kExtKeyUsage)) {
            const auto eku = ext::decode_oid_sequence(e->value);
            if (eku && std::find(eku->begin(), eku->end(), oids::kServerAuth) == eku->end() &&
                std::find(eku->begin(), eku->end(), oids::kAnyExtendedKeyUsage) == eku->end()) {
                return Finding{Stage::kExtension, verdict::kKeyUsage, "extKeyUsage lacks serverAuth"};
            }
        }
        return std::nullopt;
    }

} // namespace detail

// Every finding, in check order.
inline std::vector<Finding> diagnose(const FlawProfile &p, const Certificate &c, const TrustStore &trust,
                                     std::int64_t now) {
    std::vector<Finding> out;
    auto add = [&](std::optional<Finding> f) {
        if (f) out.push_back(std::move(*f));
    };
    add(detail::check_parse_extensions(c));
    add(detail::check_version(p, c));
    add(detail::check_validity(p, c, now));
    add(detail::check_serial(p, c));
    add(detail::check_signature(p, c, trust));
    add(detail::check_issuer(p, c, trust));
    add(detail::check_extensions(c));
    return out;
}

inline int pick_verdict(const FlawProfile &p, const std::vector<Finding> &findings) {
    if (findings.empty()) return verdict::kValid;
    if (p.first_error_only) return findings.front().code;
    const auto it = std::min_element(findings.begin(), findings.end(), [](const Finding &a, const Finding &b) {
        return severity_rank(a.stage) < severity_rank(b.stage);
    });
    return it->code;
}

inline int simulate_verify(const FlawProfile &p, const Certificate &c, const TrustStore &trust, std::int64_t now) {
    return pick_verdict(p, diagnose(p, c, trust, now));
}

// Byte-level entry point, as a real validator sees its input.
inline int simulate_verify(const FlawProfile &p, ByteView der_bytes, const TrustStore &trust, std::int64_t now) {
    Certificate c;
    try {
        c = parse_der(der_bytes);
    } catch (const std::exception &) {
        return verdict::kParsing;
    }
    return simulate_verify(p, c, trust, now);
}

// Acceptance switches of `p` that `der_bytes` depends on: turning one of
// them off makes an accepting profile reject.
inline std::vector<std::string_view> exercised_switches(const FlawProfile &p, ByteView der_bytes,
                                                        const TrustStore &trust, std::int64_t now) {
    std::vector<std::string_view> out;
    if (simulate_verify(p, der_bytes, trust, now) != verdict::kValid) return out;
    for (auto sw : kAcceptanceSwitches) {
        if (sw == "ignore_signature" || !switch_enabled(p, sw)) continue;
        if (simulate_verify(with_switch(p, sw, false), der_bytes, trust, now) != verdict::kValid) out.push_back(sw);
    }
    return out;
}

} // namespace certdiff
