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

// Deterministic synthetic seed certificates, signed with mock_sign.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/certificate.hpp"
#include "certdiff/extensions.hpp"
#include "certdiff/mock_sign.hpp"
#include "certdiff/rng.hpp"
#include "certdiff/trust.hpp"

namespace certdiff {

class InvalidParams : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kDay = 86400;
inline constexpr std::int64_t kYear = 365 * kDay;

// Fixed clock shared by the builder, the feature extractor and the simulated
// validators unless a run overrides it. 2024-01-01T00:00:00Z.
inline constexpr std::int64_t kReferenceTime = der::seconds_from_civil(der::CivilTime{2024, 1, 1, 0, 0, 0});

struct SeedParams {
    std::int64_t version = 3;
    std::int64_t reference_time = kReferenceTime;
    std::int64_t not_before_offset = -30 * kDay;
    std::int64_t not_after_offset = 335 * kDay;
    bool generalized_time = false;

    std::string issuer_country = "DE";
    std::string issuer_organization = "certdiff";
    std::string issuer_common_name = std::string(kRootCommonName);
    std::string signer_tag = std::string(kRootTag);

    std::string subject_country = "FR";
    std::string subject_organization = "Example Org";
    std::string host; // empty: drawn from the rng

    std::string key_algorithm = std::string(oids::kRsaEncryption);
    std::size_t key_bits = 2048;
    std::string signature_algorithm = std::string(oids::kSha256WithRsa);

    std::vector<std::string> extensions = {std::string(oids::kBasicConstraints), std::string(oids::kKeyUsage)};
    std::vector<std::string> critical_extensions = {std::string(oids::kBasicConstraints),
                                                    std::string(oids::kKeyUsage)};
    std::size_t serial_octets = 16;
};

inline SeedParams default_params() { return SeedParams{}; }

// The fixture the mutation catalog is measured against: every targeted
// extension present with its builder value, and a signature algorithm that
// none of the algorithm actions write.
inline SeedParams reference_params() {
    SeedParams p;
    p.extensions.clear();
    for (auto oid : ext::kTargeted) {
        p.extensions.emplace_back(oid);
    }
    p.signature_algorithm = std::string(oids::kSha384WithRsa);
    p.host = "reference.example.test";
    return p;
}

// AlgorithmIdentifier as conventionally encoded: NULL parameters for the
// RSA family, absent parameters otherwise.
inline AlgorithmIdentifier signature_algorithm_id(std::string_view oid) {
    AlgorithmIdentifier alg{std::string(oid), std::nullopt};
    if (oid.starts_with("1.2.840.113549.1.1.")) {
        alg.parameters = Bytes{der::kNull, 0x00};
    }
    return alg;
}

inline Bytes rsa_public_key(ByteView modulus, std::int64_t exponent = 65537) {
    Bytes body = der::tlv(der::kInteger, der::unsigned_integer(Bytes(modulus.begin(), modulus.end())));
    der::append(body, der::tlv(der::kInteger, der::integer_content(exponent)));
    return der::tlv(der::kSequence, body);
}

// Random positive modulus of exactly `bits` bits.
inline Bytes random_modulus(Rng &rng, std::size_t bits) {
    Bytes m((bits + 7) / 8);
    for (auto &b : m) {
        b = rng.byte();
    }
    const unsigned top = static_cast<unsigned>((bits - 1) % 8);
    m[0] = static_cast<std::uint8_t>((m[0] & ((1u << top) - 1)) | (1u << top));
    m.back() |= 0x01;
    return m;
}

// Authority key identifier derived from the issuer's signer tag.
inline Bytes issuer_key_id(std::string_view signer_tag) {
    Bytes id = mock_sign(Bytes{}, signer_tag);
    id.resize(20);
    return id;
}

namespace detail {

    inline void check_country(const std::string &code, const char *what) {
        if (code.empty()) {
            return;
        }
        if (code.size() != 2 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
            throw InvalidParams(std::string(what) + " country must be two upper-case letters, got '" + code + "'");
        }
    }

    inline void validate(const SeedParams &p) {
        if (p.version < 1 || p.version > 3) {
            throw InvalidParams("version must be 1, 2 or 3, got " + std::to_string(p.version));
        }
        if (p.version < 3 && !p.extensions.empty()) {
            throw InvalidParams("v" + std::to_string(p.version) + " certificates cannot carry extensions");
        }
        if (p.not_after_offset < p.not_before_offset) {
            throw InvalidParams("not_after precedes not_before");
        }
        if (p.key_algorithm == oids::kRsaEncryption) {
            if (p.key_bits < 512 || p.key_bits > 16384) {
                throw InvalidParams("RSA key bits must be in 512..16384, got " + std::to_string(p.key_bits));
            }
        } else if (p.key_algorithm == oids::kEcPublicKey) {
            if (p.key_bits != 256 && p.key_bits != 384) {
                throw InvalidParams("EC key bits must be 256 or 384, got " + std::to_string(p.key_bits));
            }
        } else {
            throw InvalidParams("unsupported key algorithm " + p.key_algorithm);
        }
        if (p.serial_octets < 1 || p.serial_octets > 20) {
            throw InvalidParams("serial octets must be in 1..20, got " + std::to_string(p.serial_octets));
        }
        if (!der::is_valid_oid(p.signature_algorithm)) {
            throw InvalidParams("invalid signature algorithm OID " + p.signature_algorithm);
        }
        for (const auto &oid : p.extensions) {
            if (!ext::is_targeted(oid)) {
                throw InvalidParams("builder has no value for extension " + oid);
            }
            if (std::count(p.extensions.begin(), p.extensions.end(), oid) > 1) {
                throw InvalidParams("duplicate extension " + oid);
            }
        }
        check_country(p.issuer_country, "issuer");
        check_country(p.subject_country, "subject");
        if (p.signer_tag.empty()) {
            throw InvalidParams("empty signer tag");
        }
    }

} // namespace detail

inline Certificate build_synthetic(const SeedParams &p, std::uint64_t rng_seed) {
    detail::validate(p);
    Rng rng(rng_seed);

    Certificate c;
    c.version = p.version;

    Bytes serial(p.serial_octets);
    for (auto &b : serial) {
        b = rng.byte();
    }
    serial[0] = static_cast<std::uint8_t>(0x01 + rng.below(0x7F));
    c.serial = SerialNumber{std::move(serial)};

    c.signature_algorithm = signature_algorithm_id(p.signature_algorithm);
    c.issuer = Name::make(p.issuer_country, p.issuer_organization, p.issuer_common_name);

    const std::uint8_t time_tag = p.generalized_time ? der::kGeneralizedTime : der::kUtcTime;
    c.not_before.tag = time_tag;
    c.not_before.assign(p.reference_time + p.not_before_offset);
    c.not_after.tag = time_tag;
    c.not_after.assign(p.reference_time + p.not_after_offset);

    std::string host = p.host;
    if (host.empty()) {
        host = "host" + std::to_string(rng.below(1000000)) + ".example.test";
    }
    c.subject = Name::make(p.subject_country, p.subject_organization, host);

    if (p.key_algorithm == oids::kRsaEncryption) {
        c.public_key_info.algorithm = {std::string(oids::kRsaEncryption), Bytes{der::kNull, 0x00}};
        c.public_key_info.key = rsa_public_key(random_modulus(rng, p.key_bits));
    } else {
        const auto curve = p.key_bits == 256 ? oids::kPrime256v1 : oids::kSecp384r1;
        c.public_key_info.algorithm = {std::string(oids::kEcPublicKey), der::oid(curve)};
        Bytes point{0x04};
        for (std::size_t i = 0; i < p.key_bits / 4; ++i) {
            point.push_back(rng.byte());
        }
        c.public_key_info.key = std::move(point);
    }

    Bytes key_id(32);
    for (auto &b : key_id) {
        b = rng.byte();
    }
    const Bytes authority_id = issuer_key_id(p.signer_tag);
    for (const auto &oid : p.extensions) {
        Extension e;
        e.oid = oid;
        e.critical = std::find(p.critical_extensions.begin(), p.critical_extensions.end(), oid) !=
                     p.critical_extensions.end();
        e.value = *ext::builder_value(oid, host, key_id, authority_id);
        c.extensions.push_back(std::move(e));
    }

    c.outer_signature_algorithm = c.signature_algorithm;
    c.signature_value = mock_sign(encode_tbs(c), p.signer_tag);
    return parse_der(encode_der(c));
}

inline Certificate reference_fixture() { return build_synthetic(reference_params(), 7); }

} // namespace certdiff
