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

// Structured X.509 certificate model with a lossless DER codec.
//
// A parsed certificate keeps its original bytes (der_raw, tbs_raw) next to
// the structured fields. As long as `dirty` is false, encode_der() returns
// those bytes verbatim. Any mutation sets `dirty`, after which the TBS is
// re-serialized from the fields while the outer signature algorithm and the
// signature value are carried over unchanged: mutants are never re-signed.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certdiff/der.hpp"
#include "certdiff/oids.hpp"
#include "certdiff/pem.hpp"

namespace certdiff {

struct AlgorithmIdentifier {
    std::string oid;
    std::optional<Bytes> parameters; // complete TLV, kept opaque

    bool operator==(const AlgorithmIdentifier &) const = default;
};

struct AttributeTypeAndValue {
    std::string type;
    std::uint8_t tag = der::kUtf8String;
    Bytes value;

    bool operator==(const AttributeTypeAndValue &) const = default;

    [[nodiscard]] std::string text() const { return std::string(value.begin(), value.end()); }
};

using RelativeDistinguishedName = std::vector<AttributeTypeAndValue>;

struct Name {
    std::vector<RelativeDistinguishedName> rdns;

    bool operator==(const Name &) const = default;

    [[nodiscard]] bool empty() const noexcept { return rdns.empty(); }

    [[nodiscard]] const AttributeTypeAndValue *find(std::string_view type) const {
        for (const auto &rdn : rdns) {
            for (const auto &atv : rdn) {
                if (atv.type == type) {
                    return &atv;
                }
            }
        }
        return nullptr;
    }

    [[nodiscard]] std::optional<std::string> country() const {
        if (const auto *atv = find(oids::kCountry)) {
            return atv->text();
        }
        return std::nullopt;
    }

    // Replaces the first country attribute, or prepends a new RDN holding one.
    void set_country(std::string_view code) {
        for (auto &rdn : rdns) {
            for (auto &atv : rdn) {
                if (atv.type == oids::kCountry) {
                    atv.tag = der::kPrintableString;
                    atv.value.assign(code.begin(), code.end());
                    return;
                }
            }
        }
        AttributeTypeAndValue atv{std::string(oids::kCountry), der::kPrintableString, Bytes(code.begin(), code.end())};
        rdns.insert(rdns.begin(), RelativeDistinguishedName{std::move(atv)});
    }

    // Removes every country attribute; empty RDNs are dropped.
    bool remove_country() {
        bool removed = false;
        for (auto &rdn : rdns) {
            const auto before = rdn.size();
            std::erase_if(rdn, [](const AttributeTypeAndValue &atv) { return atv.type == oids::kCountry; });
            removed = removed || rdn.size() != before;
        }
        std::erase_if(rdns, [](const RelativeDistinguishedName &rdn) { return rdn.empty(); });
        return removed;
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (const auto &rdn : rdns) {
            for (const auto &atv : rdn) {
                if (!out.empty()) {
                    out += ", ";
                }
                if (atv.type == oids::kCountry) {
                    out += "C=";
                } else if (atv.type == oids::kOrganization) {
                    out += "O=";
                } else if (atv.type == oids::kCommonName) {
                    out += "CN=";
                } else {
                    out += atv.type + "=";
                }
                out += atv.text();
            }
        }
        return out;
    }

    static Name make(std::string_view country, std::string_view organization, std::string_view common_name) {
        Name n;
        if (!country.empty()) {
            n.rdns.push_back({{std::string(oids::kCountry), der::kPrintableString, Bytes(country.begin(), country.end())}});
        }
        if (!organization.empty()) {
            n.rdns.push_back(
                {{std::string(oids::kOrganization), der::kUtf8String, Bytes(organization.begin(), organization.end())}});
        }
        if (!common_name.empty()) {
            n.rdns.push_back(
                {{std::string(oids::kCommonName), der::kUtf8String, Bytes(common_name.begin(), common_name.end())}});
        }
        return n;
    }
};

// Timestamp in seconds since the Unix epoch plus the tag it travels in.
struct Time {
    std::int64_t seconds = 0;
    std::uint8_t tag = der::kUtcTime;

    bool operator==(const Time &) const = default;

    // Writes a new instant; a UTCTime that can no longer hold the year is
    // promoted to GeneralizedTime.
    void assign(std::int64_t value) {
        seconds = value;
        if (tag == der::kUtcTime && !der::utc_time_representable(value)) {
            tag = der::kGeneralizedTime;
        }
    }

    static Time at(std::int64_t value) {
        Time t;
        t.assign(value);
        return t;
    }
};

// Arbitrary-precision INTEGER kept as minimal two's-complement octets.
struct SerialNumber {
    Bytes raw{0x01};

    bool operator==(const SerialNumber &) const = default;

    static SerialNumber from_int(std::int64_t value) { return SerialNumber{der::integer_content(value)}; }

    static SerialNumber from_octets(Bytes octets) { return SerialNumber{der::minimize_integer(std::move(octets))}; }

    [[nodiscard]] bool negative() const noexcept { return !raw.empty() && (raw[0] & 0x80) != 0; }

    [[nodiscard]] bool zero() const noexcept {
        return std::all_of(raw.begin(), raw.end(), [](std::uint8_t b) { return b == 0; });
    }

    [[nodiscard]] std::size_t octets() const noexcept { return raw.size(); }

    [[nodiscard]] SerialNumber negated() const {
        Bytes v = raw;
        v.insert(v.begin(), negative() ? 0xFF : 0x00);
        for (auto &b : v) {
            b = static_cast<std::uint8_t>(~b);
        }
        for (auto it = v.rbegin(); it != v.rend(); ++it) {
            if (++*it != 0) {
                break;
            }
        }
        return from_octets(std::move(v));
    }

    [[nodiscard]] std::string to_hex() const {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out;
        for (std::uint8_t b : raw) {
            out += kHex[b >> 4];
            out += kHex[b & 0x0F];
        }
        return out;
    }
};

struct SubjectPublicKeyInfo {
    AlgorithmIdentifier algorithm;
    std::uint8_t unused_bits = 0;
    Bytes key; // BIT STRING payload

    bool operator==(const SubjectPublicKeyInfo &) const = default;

    // RSA: bit length of the modulus. EC: coordinate size of an uncompressed
    // point. Anything else: 8 * payload size.
    [[nodiscard]] std::size_t key_bits() const {
        if (algorithm.oid == oids::kRsaEncryption) {
            try {
                der::Reader outer(key);
                auto seq = outer.expect(der::kSequence, "RSAPublicKey");
                auto inner = der::Reader::inside(seq);
                auto modulus = inner.expect(der::kInteger, "modulus");
                ByteView m = modulus.content;
                while (!m.empty() && m[0] == 0) {
                    m = m.subspan(1);
                }
                if (m.empty()) {
                    return 0;
                }
                std::size_t bits = (m.size() - 1) * 8;
                for (std::uint8_t top = m[0]; top != 0; top >>= 1) {
                    ++bits;
                }
                return bits;
            } catch (const std::exception &) {
                return key.size() * 8;
            }
        }
        if (algorithm.oid == oids::kEcPublicKey && !key.empty() && key[0] == 0x04) {
            return (key.size() - 1) / 2 * 8;
        }
        return key.size() * 8;
    }
};

struct Extension {
    std::string oid;
    bool critical = false;
    Bytes value; // extnValue OCTET STRING payload

    bool operator==(const Extension &) const = default;
};

struct Certificate {
    std::int64_t version = 3; // human value; the wire carries version - 1
    SerialNumber serial;
    AlgorithmIdentifier signature_algorithm; // TBS `signature` field
    Name issuer;
    Time not_before;
    Time not_after;
    Name subject;
    SubjectPublicKeyInfo public_key_info;
    std::optional<Bytes> issuer_unique_id;  // complete [1] TLV
    std::optional<Bytes> subject_unique_id; // complete [2] TLV
    std::vector<Extension> extensions;
    std::vector<Bytes> tbs_trailing; // unmodeled TBS elements, verbatim

    AlgorithmIdentifier outer_signature_algorithm;
    std::uint8_t signature_unused_bits = 0;
    Bytes signature_value;

    Bytes tbs_raw; // original TBS TLV when parsed
    Bytes der_raw; // original certificate when parsed
    bool dirty = true;

    [[nodiscard]] const Extension *find_extension(std::string_view oid) const {
        for (const auto &e : extensions) {
            if (e.oid == oid) {
                return &e;
            }
        }
        return nullptr;
    }

    [[nodiscard]] Extension *find_extension(std::string_view oid) {
        for (auto &e : extensions) {
            if (e.oid == oid) {
                return &e;
            }
        }
        return nullptr;
    }

    // Structural equality; cached bytes and the dirty flag are ignored.
    friend bool operator==(const Certificate &a, const Certificate &b) {
        return a.version == b.version && a.serial == b.serial && a.signature_algorithm == b.signature_algorithm &&
               a.issuer == b.issuer && a.not_before == b.not_before && a.not_after == b.not_after &&
               a.subject == b.subject && a.public_key_info == b.public_key_info &&
               a.issuer_unique_id == b.issuer_unique_id && a.subject_unique_id == b.subject_unique_id &&
               a.extensions == b.extensions && a.tbs_trailing == b.tbs_trailing &&
               a.outer_signature_algorithm == b.outer_signature_algorithm &&
               a.signature_unused_bits == b.signature_unused_bits && a.signature_value == b.signature_value;
    }
};

namespace detail {

    inline der::Tlv require(der::Reader &r, std::uint8_t tag, std::string_view what) {
        if (r.empty()) {
            throw UnsupportedStructure("missing " + std::string(what));
        }
        if (r.peek_tag() != tag) {
            throw UnsupportedStructure("unexpected element where " + std::string(what) + " was expected (offset " +
                                       std::to_string(r.offset()) + ")");
        }
        return r.next();
    }

    inline void check_bit_string(const der::Tlv &tlv) {
        if (tlv.content.empty()) {
            throw MalformedDer(tlv.offset, "BIT STRING without unused-bits octet");
        }
        const std::uint8_t unused = tlv.content[0];
        if (unused > 7 || (tlv.content.size() == 1 && unused != 0)) {
            throw MalformedDer(tlv.offset, "invalid BIT STRING unused-bits count");
        }
        if (unused != 0 && (tlv.content.back() & ((1u << unused) - 1)) != 0) {
            throw MalformedDer(tlv.offset, "non-zero BIT STRING padding bits");
        }
    }

    inline AlgorithmIdentifier parse_algorithm(der::Reader &r, std::string_view what) {
        auto seq = require(r, der::kSequence, what);
        auto inner = der::Reader::inside(seq);
        AlgorithmIdentifier alg;
        alg.oid = der::read_oid(require(inner, der::kOid, std::string(what) + " algorithm"));
        if (!inner.empty()) {
            auto params = inner.next();
            alg.parameters = Bytes(params.whole.begin(), params.whole.end());
        }
        if (!inner.empty()) {
            throw UnsupportedStructure("unexpected element in " + std::string(what));
        }
        return alg;
    }

    inline Name parse_name(der::Reader &r, std::string_view what) {
        auto seq = require(r, der::kSequence, what);
        auto rdns = der::Reader::inside(seq);
        Name name;
        while (!rdns.empty()) {
            auto set = require(rdns, der::kSet, "RDN");
            auto atvs = der::Reader::inside(set);
            RelativeDistinguishedName rdn;
            while (!atvs.empty()) {
                auto atv_seq = require(atvs, der::kSequence, "AttributeTypeAndValue");
                auto atv = der::Reader::inside(atv_seq);
                AttributeTypeAndValue out;
                out.type = der::read_oid(require(atv, der::kOid, "attribute type"));
                if (atv.empty()) {
                    throw UnsupportedStructure("attribute without value");
                }
                auto value = atv.next();
                out.tag = value.tag;
                out.value.assign(value.content.begin(), value.content.end());
                if (!atv.empty()) {
                    throw UnsupportedStructure("unexpected element in AttributeTypeAndValue");
                }
                rdn.push_back(std::move(out));
            }
            name.rdns.push_back(std::move(rdn));
        }
        return name;
    }

    inline Bytes encode_algorithm(const AlgorithmIdentifier &alg) {
        Bytes body = der::oid(alg.oid);
        if (alg.parameters) {
            der::append(body, *alg.parameters);
        }
        return der::tlv(der::kSequence, body);
    }

    inline Bytes encode_name(const Name &name) {
        Bytes body;
        for (const auto &rdn : name.rdns) {
            Bytes set_body;
            for (const auto &atv : rdn) {
                Bytes atv_body = der::oid(atv.type);
                der::append_tlv(atv_body, atv.tag, atv.value);
                der::append_tlv(set_body, der::kSequence, atv_body);
            }
            der::append_tlv(body, der::kSet, set_body);
        }
        return der::tlv(der::kSequence, body);
    }

    inline Bytes bit_string(std::uint8_t unused_bits, ByteView payload) {
        Bytes content;
        content.reserve(payload.size() + 1);
        content.push_back(unused_bits);
        der::append(content, payload);
        return der::tlv(der::kBitString, content);
    }

} // namespace detail

inline Bytes encode_name(const Name &name) { return detail::encode_name(name); }

inline Bytes encode_extension(const Extension &ext) {
    Bytes body = der::oid(ext.oid);
    if (ext.critical) {
        const std::uint8_t t[] = {0xFF};
        der::append_tlv(body, der::kBoolean, t);
    }
    der::append_tlv(body, der::kOctetString, ext.value);
    return der::tlv(der::kSequence, body);
}

// TBSCertificate serialized from the structured fields.
inline Bytes encode_tbs(const Certificate &cert) {
    Bytes body;
    if (cert.version != 1) {
        if (cert.version == std::numeric_limits<std::int64_t>::min()) {
            throw EncodingOverflow("version out of range");
        }
        const Bytes v = der::tlv(der::kInteger, der::integer_content(cert.version - 1));
        der::append_tlv(body, der::context(0, true), v);
    }
    const Bytes serial = der::minimize_integer(cert.serial.raw);
    der::append_tlv(body, der::kInteger, serial);
    der::append(body, detail::encode_algorithm(cert.signature_algorithm));
    der::append(body, detail::encode_name(cert.issuer));
    Bytes validity = der::time(cert.not_before.tag, cert.not_before.seconds);
    der::append(validity, der::time(cert.not_after.tag, cert.not_after.seconds));
    der::append_tlv(body, der::kSequence, validity);
    der::append(body, detail::encode_name(cert.subject));
    Bytes spki = detail::encode_algorithm(cert.public_key_info.algorithm);
    der::append(spki, detail::bit_string(cert.public_key_info.unused_bits, cert.public_key_info.key));
    der::append_tlv(body, der::kSequence, spki);
    if (cert.issuer_unique_id) {
        der::append(body, *cert.issuer_unique_id);
    }
    if (cert.subject_unique_id) {
        der::append(body, *cert.subject_unique_id);
    }
    if (!cert.extensions.empty()) {
        Bytes list;
        for (const auto &ext : cert.extensions) {
            der::append(list, encode_extension(ext));
        }
        der::append_tlv(body, der::context(3, true), der::tlv(der::kSequence, list));
    }
    for (const auto &opaque : cert.tbs_trailing) {
        der::append(body, opaque);
    }
    return der::tlv(der::kSequence, body);
}

// TBS bytes as a verifier would hash them.
inline Bytes tbs_der(const Certificate &cert) {
    if (!cert.dirty && !cert.tbs_raw.empty()) {
        return cert.tbs_raw;
    }
    return encode_tbs(cert);
}

inline Bytes encode_der(const Certificate &cert) {
    if (!cert.dirty && !cert.der_raw.empty()) {
        return cert.der_raw;
    }
    Bytes body = tbs_der(cert);
    der::append(body, detail::encode_algorithm(cert.outer_signature_algorithm));
    der::append(body, detail::bit_string(cert.signature_unused_bits, cert.signature_value));
    return der::tlv(der::kSequence, body);
}

inline Certificate parse_der(ByteView input) {
    if (input.empty() || input[0] != der::kSequence) {
        throw MalformedDer(0, "certificate must start with a SEQUENCE tag");
    }
    der::Reader top(input);
    const auto cert_tlv = top.next();
    top.expect_end("certificate");

    Certificate cert;
    auto outer = der::Reader::inside(cert_tlv);
    const auto tbs = detail::require(outer, der::kSequence, "tbsCertificate");
    cert.outer_signature_algorithm = detail::parse_algorithm(outer, "signatureAlgorithm");
    const auto sig = detail::require(outer, der::kBitString, "signatureValue");
    detail::check_bit_string(sig);
    cert.signature_unused_bits = sig.content[0];
    cert.signature_value.assign(sig.content.begin() + 1, sig.content.end());
    if (!outer.empty()) {
        throw UnsupportedStructure("unexpected element after signatureValue");
    }

    auto r = der::Reader::inside(tbs);
    if (!r.empty() && r.peek_tag() == der::context(0, true)) {
        const auto wrapper = r.next();
        auto vr = der::Reader::inside(wrapper);
        const auto v = detail::require(vr, der::kInteger, "version");
        vr.expect_end("version");
        const std::int64_t wire = der::read_small_integer(v);
        if (wire == 0) {
            throw MalformedDer(wrapper.offset, "DEFAULT version v1 must be omitted");
        }
        if (wire == std::numeric_limits<std::int64_t>::max()) {
            throw UnsupportedStructure("version out of range");
        }
        cert.version = wire + 1;
    } else {
        cert.version = 1;
    }

    const auto serial = detail::require(r, der::kInteger, "serialNumber");
    if (!der::is_minimal_integer(serial.content)) {
        throw MalformedDer(serial.offset, "non-minimal INTEGER");
    }
    cert.serial.raw.assign(serial.content.begin(), serial.content.end());
    cert.signature_algorithm = detail::parse_algorithm(r, "signature");
    cert.issuer = detail::parse_name(r, "issuer");

    const auto validity = detail::require(r, der::kSequence, "validity");
    auto vr = der::Reader::inside(validity);
    for (Time *t : {&cert.not_before, &cert.not_after}) {
        if (vr.empty()) {
            throw UnsupportedStructure("incomplete validity");
        }
        const auto tt = vr.next();
        t->seconds = der::read_time(tt);
        t->tag = tt.tag;
    }
    if (!vr.empty()) {
        throw UnsupportedStructure("unexpected element in validity");
    }

    cert.subject = detail::parse_name(r, "subject");

    const auto spki = detail::require(r, der::kSequence, "subjectPublicKeyInfo");
    auto sr = der::Reader::inside(spki);
    cert.public_key_info.algorithm = detail::parse_algorithm(sr, "subjectPublicKeyInfo");
    const auto key = detail::require(sr, der::kBitString, "subjectPublicKey");
    detail::check_bit_string(key);
    cert.public_key_info.unused_bits = key.content[0];
    cert.public_key_info.key.assign(key.content.begin() + 1, key.content.end());
    if (!sr.empty()) {
        throw UnsupportedStructure("unexpected element in subjectPublicKeyInfo");
    }

    if (!r.empty() && r.peek_tag() == der::context(1, false)) {
        const auto uid = r.next();
        detail::check_bit_string(uid);
        cert.issuer_unique_id = Bytes(uid.whole.begin(), uid.whole.end());
    }
    if (!r.empty() && r.peek_tag() == der::context(2, false)) {
        const auto uid = r.next();
        detail::check_bit_string(uid);
        cert.subject_unique_id = Bytes(uid.whole.begin(), uid.whole.end());
    }
    if (!r.empty() && r.peek_tag() == der::context(3, true)) {
        const auto wrapper = r.next();
        auto wr = der::Reader::inside(wrapper);
        const auto list = detail::require(wr, der::kSequence, "extensions");
        wr.expect_end("extensions wrapper");
        auto lr = der::Reader::inside(list);
        if (lr.empty()) {
            throw UnsupportedStructure("empty extensions list");
        }
        while (!lr.empty()) {
            const auto ext_tlv = detail::require(lr, der::kSequence, "Extension");
            auto er = der::Reader::inside(ext_tlv);
            Extension ext;
            ext.oid = der::read_oid(detail::require(er, der::kOid, "extnID"));
            if (!er.empty() && er.peek_tag() == der::kBoolean) {
                const auto b = er.next();
                ext.critical = der::read_boolean(b);
                if (!ext.critical) {
                    throw MalformedDer(b.offset, "DEFAULT critical=FALSE must be omitted");
                }
            }
            const auto value = detail::require(er, der::kOctetString, "extnValue");
            ext.value.assign(value.content.begin(), value.content.end());
            if (!er.empty()) {
                throw UnsupportedStructure("unexpected element in Extension");
            }
            cert.extensions.push_back(std::move(ext));
        }
    }
    while (!r.empty()) {
        const auto opaque = r.next();
        cert.tbs_trailing.emplace_back(opaque.whole.begin(), opaque.whole.end());
    }

    cert.tbs_raw.assign(tbs.whole.begin(), tbs.whole.end());
    cert.der_raw.assign(input.begin(), input.end());
    cert.dirty = false;
    return cert;
}

// Accepts PEM armor or raw DER.
inline Certificate parse_any(ByteView data) {
    if (looks_like_pem(data)) {
        const Bytes der_bytes = pem_decode(std::string_view(reinterpret_cast<const char *>(data.data()), data.size()));
        return parse_der(der_bytes);
    }
    return parse_der(data);
}

} // namespace certdiff
