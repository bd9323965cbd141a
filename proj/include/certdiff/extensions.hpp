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

// Encoders and shallow decoders for the extension types the builder, the
// mutation catalog and the simulated validators care about.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "certdiff/der.hpp"
#include "certdiff/oids.hpp"

namespace certdiff::ext {

// The eleven extension types the mutation catalog targets, in catalog order.
inline constexpr std::array<std::string_view, 11> kTargeted = {
    oids::kBasicConstraints,      oids::kKeyUsage,         oids::kExtKeyUsage,          oids::kSubjectAltName,
    oids::kAuthorityKeyIdentifier, oids::kSubjectKeyIdentifier, oids::kCrlDistributionPoints,
    oids::kCertificatePolicies,   oids::kAuthorityInfoAccess, oids::kNameConstraints,  oids::kPrivateTestExtension,
};

inline bool is_targeted(std::string_view oid) {
    for (auto t : kTargeted) {
        if (t == oid) {
            return true;
        }
    }
    return false;
}

inline std::string_view short_name(std::string_view oid) {
    if (oid == oids::kBasicConstraints) return "basicConstraints";
    if (oid == oids::kKeyUsage) return "keyUsage";
    if (oid == oids::kExtKeyUsage) return "extKeyUsage";
    if (oid == oids::kSubjectAltName) return "subjectAltName";
    if (oid == oids::kAuthorityKeyIdentifier) return "authorityKeyIdentifier";
    if (oid == oids::kSubjectKeyIdentifier) return "subjectKeyIdentifier";
    if (oid == oids::kCrlDistributionPoints) return "cRLDistributionPoints";
    if (oid == oids::kCertificatePolicies) return "certificatePolicies";
    if (oid == oids::kAuthorityInfoAccess) return "authorityInfoAccess";
    if (oid == oids::kNameConstraints) return "nameConstraints";
    if (oid == oids::kPrivateTestExtension) return "privateTestExtension";
    return oid;
}

namespace detail {

    inline ByteView text(std::string_view s) { return {reinterpret_cast<const std::uint8_t *>(s.data()), s.size()}; }

    inline Bytes seq(std::initializer_list<Bytes> parts) {
        Bytes body;
        for (const auto &p : parts) {
            der::append(body, p);
        }
        return der::tlv(der::kSequence, body);
    }

    inline Bytes access(std::string_view access_method, std::string_view uri) {
        return seq({der::oid(access_method), der::tlv(der::context(6, false), text(uri))});
    }

    inline Bytes uri_list(std::string_view access_method, std::string_view uri) {
        return seq({access(access_method, uri)});
    }

    inline Bytes crl_dps(std::initializer_list<std::string_view> uris) {
        Bytes body;
        for (auto uri : uris) {
            const Bytes general_name = der::tlv(der::context(6, false), text(uri));
            const Bytes full_name = der::tlv(der::context(0, true), general_name);
            const Bytes dp_name = der::tlv(der::context(0, true), full_name);
            der::append_tlv(body, der::kSequence, dp_name);
        }
        return der::tlv(der::kSequence, body);
    }

    inline Bytes key_usage(std::initializer_list<std::uint8_t> bytes, std::uint8_t unused) {
        Bytes content{unused};
        content.insert(content.end(), bytes.begin(), bytes.end());
        return der::tlv(der::kBitString, content);
    }

} // namespace detail

// KeyUsage bit positions (bit 0 is the most significant bit of the first octet).
enum KeyUsageBit : std::uint16_t {
    kDigitalSignature = 1u << 0,
    kNonRepudiation = 1u << 1,
    kKeyEncipherment = 1u << 2,
    kDataEncipherment = 1u << 3,
    kKeyAgreement = 1u << 4,
    kKeyCertSign = 1u << 5,
    kCrlSign = 1u << 6,
};

inline Bytes basic_constraints(bool ca, std::optional<std::int64_t> path_len = std::nullopt) {
    Bytes body;
    if (ca) {
        const std::uint8_t t[] = {0xFF};
        der::append_tlv(body, der::kBoolean, t);
    }
    if (path_len) {
        der::append_tlv(body, der::kInteger, der::integer_content(*path_len));
    }
    return der::tlv(der::kSequence, body);
}

// Realistic leaf-certificate value used by the synthetic builder. Each one
// lands in a different feature class than the default and alternate values.
inline std::optional<Bytes> builder_value(std::string_view oid, std::string_view host, ByteView key_id,
                                          ByteView authority_key_id) {
    using detail::seq;
    using detail::text;
    if (oid == oids::kBasicConstraints) return basic_constraints(false);
    if (oid == oids::kKeyUsage) return detail::key_usage({0xA0}, 5); // digitalSignature, keyEncipherment
    if (oid == oids::kExtKeyUsage) return seq({der::oid(oids::kServerAuth), der::oid(oids::kClientAuth)});
    if (oid == oids::kSubjectAltName) {
        const std::string www = "www." + std::string(host);
        return seq({der::tlv(der::context(2, false), text(host)), der::tlv(der::context(2, false), text(www))});
    }
    if (oid == oids::kAuthorityKeyIdentifier) {
        const Bytes issuer = der::tlv(der::context(1, true), der::tlv(der::context(2, false), text("ca.certdiff.test")));
        const std::uint8_t serial[] = {0x01};
        return seq({der::tlv(der::context(0, false), authority_key_id), issuer,
                    der::tlv(der::context(2, false), serial)});
    }
    if (oid == oids::kSubjectKeyIdentifier) return der::tlv(der::kOctetString, key_id);
    if (oid == oids::kCrlDistributionPoints) {
        return detail::crl_dps({"http://crl.certdiff.test/root.crl", "ldap://crl.certdiff.test/root"});
    }
    if (oid == oids::kCertificatePolicies) return seq({seq({der::oid(oids::kOrganizationValidated)})});
    if (oid == oids::kAuthorityInfoAccess) {
        return seq({detail::access(oids::kOcsp, "http://ocsp.certdiff.test"),
                    detail::access(oids::kCaIssuers, "http://ca.certdiff.test/root.crt")});
    }
    if (oid == oids::kNameConstraints) {
        const Bytes permitted = seq({der::tlv(der::context(2, false), text(".example.test"))});
        const Bytes excluded = seq({der::tlv(der::context(2, false), text(".internal.example.test"))});
        return seq({der::tlv(der::context(0, true), permitted), der::tlv(der::context(1, true), excluded)});
    }
    if (oid == oids::kPrivateTestExtension) return der::tlv(der::kUtf8String, text("certdiff"));
    return std::nullopt;
}

// Value written by the "add with default value" action.
inline Bytes default_value(std::string_view oid) {
    using detail::seq;
    using detail::text;
    if (oid == oids::kBasicConstraints) return basic_constraints(true);
    if (oid == oids::kKeyUsage) return detail::key_usage({0x06}, 1); // keyCertSign, cRLSign
    if (oid == oids::kExtKeyUsage) return seq({der::oid(oids::kServerAuth)});
    if (oid == oids::kSubjectAltName) return seq({der::tlv(der::context(2, false), text("example.com"))});
    if (oid == oids::kAuthorityKeyIdentifier) {
        const Bytes id(20, 0x11);
        return seq({der::tlv(der::context(0, false), id)});
    }
    if (oid == oids::kSubjectKeyIdentifier) return der::tlv(der::kOctetString, Bytes(20, 0x22));
    if (oid == oids::kCrlDistributionPoints) return detail::crl_dps({"http://crl.example.com/default.crl"});
    if (oid == oids::kCertificatePolicies) return seq({seq({der::oid(oids::kAnyPolicy)})});
    if (oid == oids::kAuthorityInfoAccess) return detail::uri_list(oids::kOcsp, "http://ocsp.example.com");
    if (oid == oids::kNameConstraints) {
        const Bytes subtree = seq({der::tlv(der::context(2, false), text(".example.com"))});
        return seq({der::tlv(der::context(0, true), subtree)});
    }
    return der::tlv(der::kUtf8String, text("default"));
}

// Value written by the "set alternate value" action: well-formed, but in a
// different semantic class than the default.
inline Bytes alternate_value(std::string_view oid) {
    using detail::seq;
    using detail::text;
    if (oid == oids::kBasicConstraints) return basic_constraints(true, 0);
    if (oid == oids::kKeyUsage) return detail::key_usage({0x20}, 5); // keyEncipherment only
    if (oid == oids::kExtKeyUsage) return seq({der::oid(oids::kCodeSigning)});
    if (oid == oids::kSubjectAltName) return seq({der::tlv(der::context(1, false), text("admin@example.com"))});
    if (oid == oids::kAuthorityKeyIdentifier) {
        const std::uint8_t serial[] = {0x01};
        return seq({der::tlv(der::context(2, false), serial)});
    }
    if (oid == oids::kSubjectKeyIdentifier) return der::tlv(der::kOctetString, Bytes(8, 0x33));
    if (oid == oids::kCrlDistributionPoints) return detail::crl_dps({"ldap://crl.example.com/alt"});
    if (oid == oids::kCertificatePolicies) return seq({seq({der::oid(oids::kDomainValidated)})});
    if (oid == oids::kAuthorityInfoAccess) return detail::uri_list(oids::kCaIssuers, "http://ca.example.com/ca.crt");
    if (oid == oids::kNameConstraints) {
        const Bytes subtree = seq({der::tlv(der::context(2, false), text(".evil.example"))});
        return seq({der::tlv(der::context(1, true), subtree)});
    }
    return der::tlv(der::kUtf8String, text("alternate"));
}

// Fixed malformed pattern per type: the expected outer tag followed by a
// length that overruns the content.
inline Bytes corrupt_value(std::string_view oid) {
    std::uint8_t tag = der::kSequence;
    if (oid == oids::kKeyUsage) {
        tag = der::kBitString;
    } else if (oid == oids::kSubjectKeyIdentifier) {
        tag = der::kOctetString;
    } else if (oid == oids::kPrivateTestExtension) {
        tag = der::kUtf8String;
    }
    std::uint8_t index = 0;
    for (std::size_t i = 0; i < kTargeted.size(); ++i) {
        if (kTargeted[i] == oid) {
            index = static_cast<std::uint8_t>(i);
        }
    }
    return Bytes{tag, 0x7F, static_cast<std::uint8_t>(0xA0 | index)};
}

// ---- Decoders ---------------------------------------------------------------
// Each returns std::nullopt when the value does not decode cleanly.

struct BasicConstraintsInfo {
    bool ca = false;
    std::optional<std::int64_t> path_len;
};

namespace detail {

    template <typename F> auto guarded(F &&f) -> decltype(f()) {
        try {
            return f();
        } catch (const std::exception &) {
            return std::nullopt;
        }
    }

    inline der::Tlv single(ByteView value, std::uint8_t tag) {
        der::Reader r(value);
        auto t = r.expect(tag, "extension value");
        r.expect_end("extension value");
        return t;
    }

} // namespace detail

inline std::optional<BasicConstraintsInfo> decode_basic_constraints(ByteView value) {
    return detail::guarded([&]() -> std::optional<BasicConstraintsInfo> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        BasicConstraintsInfo info;
        if (!r.empty() && r.peek_tag() == der::kBoolean) {
            info.ca = der::read_boolean(r.next());
            if (!info.ca) {
                return std::nullopt; // DEFAULT FALSE encoded explicitly
            }
        }
        if (!r.empty()) {
            const std::int64_t n = der::read_small_integer(r.expect(der::kInteger, "pathLenConstraint"));
            if (n < 0) {
                return std::nullopt;
            }
            info.path_len = n;
        }
        if (!r.empty()) {
            return std::nullopt;
        }
        return info;
    });
}

// Bit mask over KeyUsageBit; empty or all-zero bit strings are malformed.
inline std::optional<std::uint16_t> decode_key_usage(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::uint16_t> {
        const auto t = detail::single(value, der::kBitString);
        if (t.content.size() < 2 || t.content.size() > 3 || t.content[0] > 7) {
            return std::nullopt;
        }
        std::uint16_t mask = 0;
        for (std::size_t byte = 1; byte < t.content.size(); ++byte) {
            for (int bit = 0; bit < 8; ++bit) {
                if (t.content[byte] & (0x80 >> bit)) {
                    mask = static_cast<std::uint16_t>(mask | (1u << ((byte - 1) * 8 + static_cast<std::size_t>(bit))));
                }
            }
        }
        if (mask == 0) {
            return std::nullopt;
        }
        return mask;
    });
}

inline std::optional<std::vector<std::string>> decode_oid_sequence(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::vector<std::string>> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        std::vector<std::string> out;
        while (!r.empty()) {
            out.push_back(der::read_oid(r.expect(der::kOid, "KeyPurposeId")));
        }
        if (out.empty()) {
            return std::nullopt;
        }
        return out;
    });
}

// Context tags of the GeneralNames in a SEQUENCE OF GeneralName.
inline std::optional<std::vector<std::uint8_t>> decode_general_names(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::vector<std::uint8_t>> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        std::vector<std::uint8_t> tags;
        while (!r.empty()) {
            const auto t = r.next();
            if ((t.tag & 0xC0) != 0x80) {
                return std::nullopt;
            }
            tags.push_back(static_cast<std::uint8_t>(t.tag & 0x1F));
        }
        if (tags.empty()) {
            return std::nullopt;
        }
        return tags;
    });
}

// Context tags present in an AuthorityKeyIdentifier or NameConstraints SEQUENCE.
inline std::optional<std::vector<std::uint8_t>> decode_tagged_fields(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::vector<std::uint8_t>> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        std::vector<std::uint8_t> tags;
        while (!r.empty()) {
            const auto t = r.next();
            if ((t.tag & 0xC0) != 0x80) {
                return std::nullopt;
            }
            const auto n = static_cast<std::uint8_t>(t.tag & 0x1F);
            if (!tags.empty() && n <= tags.back()) {
                return std::nullopt;
            }
            tags.push_back(n);
        }
        return tags;
    });
}

inline std::optional<std::size_t> decode_key_identifier(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::size_t> {
        const auto t = detail::single(value, der::kOctetString);
        if (t.content.empty()) {
            return std::nullopt;
        }
        return t.content.size();
    });
}

// First OID of each element in a SEQUENCE OF SEQUENCE { OID, ... }.
inline std::optional<std::vector<std::string>> decode_policy_like(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::vector<std::string>> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        std::vector<std::string> out;
        while (!r.empty()) {
            auto inner = der::Reader::inside(r.expect(der::kSequence, "element"));
            out.push_back(der::read_oid(inner.expect(der::kOid, "identifier")));
            while (!inner.empty()) {
                (void)inner.next();
            }
        }
        if (out.empty()) {
            return std::nullopt;
        }
        return out;
    });
}

// SEQUENCE OF DistributionPoint; one entry per point holding its first
// fullName URI, or an empty string when it has none.
inline std::optional<std::vector<std::string>> decode_distribution_points(ByteView value) {
    return detail::guarded([&]() -> std::optional<std::vector<std::string>> {
        auto r = der::Reader::inside(detail::single(value, der::kSequence));
        std::vector<std::string> out;
        while (!r.empty()) {
            auto dp = der::Reader::inside(r.expect(der::kSequence, "DistributionPoint"));
            std::string uri;
            while (!dp.empty()) {
                const auto field = dp.next();
                if (field.tag != der::context(0, true)) {
                    continue;
                }
                auto name = der::Reader::inside(field);
                const auto full = name.next();
                if (full.tag != der::context(0, true)) {
                    continue;
                }
                auto names = der::Reader::inside(full);
                while (!names.empty()) {
                    const auto gn = names.next();
                    if (gn.tag == der::context(6, false) && uri.empty()) {
                        uri.assign(gn.content.begin(), gn.content.end());
                    }
                }
            }
            out.push_back(std::move(uri));
        }
        if (out.empty()) {
            return std::nullopt;
        }
        return out;
    });
}

// True if the value decodes according to its type; unknown types always pass.
inline bool well_formed(std::string_view oid, ByteView value) {
    if (oid == oids::kBasicConstraints) return decode_basic_constraints(value).has_value();
    if (oid == oids::kKeyUsage) return decode_key_usage(value).has_value();
    if (oid == oids::kExtKeyUsage) return decode_oid_sequence(value).has_value();
    if (oid == oids::kSubjectAltName || oid == oids::kIssuerAltName) return decode_general_names(value).has_value();
    if (oid == oids::kAuthorityKeyIdentifier) return decode_tagged_fields(value).has_value();
    if (oid == oids::kSubjectKeyIdentifier) return decode_key_identifier(value).has_value();
    if (oid == oids::kCrlDistributionPoints || oid == oids::kFreshestCrl) {
        return decode_distribution_points(value).has_value();
    }
    if (oid == oids::kCertificatePolicies || oid == oids::kAuthorityInfoAccess || oid == oids::kSubjectInfoAccess) {
        return decode_policy_like(value).has_value();
    }
    if (oid == oids::kNameConstraints) {
        const auto tags = decode_tagged_fields(value);
        return tags && !tags->empty() && tags->back() <= 1;
    }
    if (oid == oids::kPrivateTestExtension) {
        return detail::guarded([&]() -> std::optional<bool> {
                   (void)detail::single(value, der::kUtf8String);
                   return true;
               }).has_value();
    }
    return true;
}

} // namespace certdiff::ext
