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

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace certdiff;
using certdiff::testing::fixture;
using certdiff::testing::load_fixture;
using certdiff::testing::seed7;

namespace {

// Two's-complement minimal encoding, written out independently of der.hpp.
Bytes reference_integer(std::int64_t v) {
    Bytes out;
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> shift) & 0xFF));
    while (out.size() > 1 && ((out[0] == 0x00 && !(out[1] & 0x80)) || (out[0] == 0xFF && (out[1] & 0x80)))) out.erase(out.begin());
    return out;
}

Bytes bytes(std::initializer_list<int> v) {
    Bytes out;
    for (int x : v) out.push_back(static_cast<std::uint8_t>(x));
    return out;
}

} // namespace

TEST(Builder, DefaultSeedIsVersion3WithBasicConstraintsAndKeyUsage) {
    const Certificate c = parse_der(encode_der(seed7()));
    EXPECT_EQ(c.version, 3);
    ASSERT_NE(c.find_extension(oids::kBasicConstraints), nullptr);
    ASSERT_NE(c.find_extension(oids::kKeyUsage), nullptr);
    EXPECT_EQ(c.extensions.size(), 2u);
}

TEST(Builder, MatchesFrozenFixtureBytes) {
    EXPECT_EQ(encode_der(seed7()), encode_der(load_fixture("default_seed7.pem")));
    EXPECT_EQ(encode_der(reference_fixture()), encode_der(load_fixture("reference.pem")));
}

TEST(Builder, DeterministicPerSeed) {
    EXPECT_EQ(encode_der(build_synthetic(default_params(), 11)), encode_der(build_synthetic(default_params(), 11)));
    EXPECT_NE(encode_der(build_synthetic(default_params(), 11)), encode_der(build_synthetic(default_params(), 12)));
}

TEST(Builder, RejectsInvalidParams) {
    auto p = default_params();
    p.version = 0;
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.version = 1; // still has extensions
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.not_after_offset = p.not_before_offset - 1;
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.key_bits = 100;
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.serial_octets = 21;
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.extensions.push_back(std::string(oids::kBasicConstraints));
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
    p = default_params();
    p.extensions.push_back("1.2.3.4");
    EXPECT_THROW(build_synthetic(p, 1), InvalidParams);
}

TEST(Builder, RsaModulusIsPositiveInteger) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Certificate c = build_synthetic(default_params(), seed);
        der::Reader outer(c.public_key_info.key);
        auto inner = der::Reader::inside(outer.expect(der::kSequence, "RSAPublicKey"));
        const auto m = inner.expect(der::kInteger, "modulus");
        EXPECT_EQ(m.content[0] & 0x80, 0) << seed;
        EXPECT_EQ(c.public_key_info.key_bits(), 2048u) << seed;
    }
}

TEST(Codec, RoundTripFixtures) {
    for (const char *name : {"default_seed7.pem", "reference.pem", "openssl_selfsigned.pem"}) {
        const Bytes raw = pem_decode(std::string_view(reinterpret_cast<const char *>(read_file(fixture(name)).data()),
                                                      read_file(fixture(name)).size()));
        Certificate c = parse_der(raw);
        EXPECT_EQ(encode_der(c), raw) << name;
        c.dirty = true; // force a re-encode from fields
        EXPECT_EQ(encode_der(c), raw) << name;
    }
}

TEST(Codec, RoundTripGeneratedCorpus) {
    const SeedCorpus corpus = generate_corpus(300, 21);
    for (const auto &s : corpus.seeds) {
        Certificate c = parse_der(s.der);
        c.dirty = true;
        ASSERT_EQ(encode_der(c), s.der) << s.id;
    }
}

TEST(Codec, ForeignCertificateFields) {
    const Certificate c = load_fixture("openssl_selfsigned.pem");
    EXPECT_EQ(c.version, 3);
    EXPECT_EQ(c.subject.country(), "DE");
    EXPECT_EQ(c.public_key_info.algorithm.oid, oids::kEcPublicKey);
    EXPECT_EQ(c.signature_algorithm.oid, oids::kEcdsaWithSha256);
    EXPECT_NE(c.find_extension(oids::kSubjectAltName), nullptr);
}

TEST(Codec, RejectsMalformedDer) {
    const Bytes good = encode_der(seed7());
    EXPECT_THROW(parse_der(Bytes{}), MalformedDer);
    EXPECT_THROW(parse_der(Bytes(good.begin(), good.end() - 1)), MalformedDer);
    Bytes trailing = good;
    trailing.push_back(0x00);
    EXPECT_THROW(parse_der(trailing), MalformedDer);
    Bytes indefinite = good;
    indefinite[1] = 0x80;
    EXPECT_THROW(parse_der(indefinite), MalformedDer);
    // Long form where the short form suffices.
    EXPECT_THROW(parse_der(bytes({0x30, 0x81, 0x03, 0x02, 0x01, 0x01})), MalformedDer);
    EXPECT_THROW(parse_der(bytes({0x04, 0x00})), MalformedDer);
}

TEST(Codec, RejectsNonCanonicalFields) {
    Certificate c = seed7();
    c.extensions[0].critical = true;
    Bytes der_bytes = encode_der(c);
    // BOOLEAN TRUE must be 0xFF in DER.
    const Bytes needle = bytes({0x01, 0x01, 0xFF});
    auto it = std::search(der_bytes.begin(), der_bytes.end(), needle.begin(), needle.end());
    ASSERT_NE(it, der_bytes.end());
    it[2] = 0x01;
    EXPECT_THROW(parse_der(der_bytes), MalformedDer);
}

TEST(Codec, MissingFieldIsUnsupportedStructure) {
    // SEQUENCE { SEQUENCE {} } has no signatureAlgorithm.
    EXPECT_ANY_THROW(parse_der(bytes({0x30, 0x02, 0x30, 0x00})));
}

TEST(Codec, OutOfRangeYearOverflowsOnEncode) {
    Certificate c = seed7();
    c.not_after.tag = der::kGeneralizedTime;
    c.not_after.seconds = der::seconds_from_civil(der::CivilTime{10000, 1, 1, 0, 0, 0});
    c.dirty = true;
    EXPECT_THROW(encode_der(c), EncodingOverflow);
}

TEST(Codec, MutationsAreNotResigned) {
    const Certificate seed = seed7();
    Certificate c = seed;
    c.serial = SerialNumber::from_int(42);
    c.dirty = true;
    const Certificate back = parse_der(encode_der(c));
    EXPECT_EQ(back.signature_value, seed.signature_value);
    EXPECT_EQ(back.serial.raw, bytes({42}));
}

TEST(Serial, IntegerEncodingMatchesReference) {
    for (std::int64_t v : {0LL, 1LL, -1LL, 127LL, 128LL, -128LL, -129LL, 255LL, 256LL, 65535LL, -65536LL,
                           0x7FFFFFFFFFFFFFFFLL, static_cast<long long>(INT64_MIN)}) {
        EXPECT_EQ(SerialNumber::from_int(v).raw, reference_integer(v)) << v;
    }
    EXPECT_EQ(SerialNumber::from_int(-1).raw, bytes({0xFF}));
}

TEST(Serial, NegativeSerialSurvivesRoundTrip) {
    Certificate c = seed7();
    c.serial = SerialNumber::from_int(-1);
    c.dirty = true;
    const Certificate back = parse_der(encode_der(c));
    EXPECT_TRUE(back.serial.negative());
    EXPECT_EQ(back.serial.raw, bytes({0xFF}));
}

TEST(Pem, RoundTripAndArmor) {
    const Bytes der_bytes = encode_der(seed7());
    const std::string pem = pem_encode(der_bytes);
    EXPECT_TRUE(pem.starts_with("-----BEGIN CERTIFICATE-----\n"));
    EXPECT_EQ(pem_decode(pem), der_bytes);
    for (std::size_t pos = 0; (pos = pem.find('\n', pos)) != std::string::npos; ++pos) {
        const std::size_t start = pem.rfind('\n', pos - 1);
        EXPECT_LE(pos - (start == std::string::npos ? 0 : start + 1), 64u);
    }
}

TEST(Pem, Base64Vectors) {
    const std::string s = "foobar";
    const std::pair<const char *, const char *> vectors[] = {
        {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"}};
    for (const auto &[plain, enc] : vectors) {
        const Bytes b(plain, plain + std::strlen(plain));
        EXPECT_EQ(base64_encode(b), enc);
        EXPECT_EQ(base64_decode(enc), b);
    }
}

TEST(Pem, RejectsBadInput) {
    EXPECT_THROW(pem_decode("no armor here"), MalformedPem);
    EXPECT_THROW(pem_decode("-----BEGIN CERTIFICATE-----\nZm9v\n"), MalformedPem);
    EXPECT_THROW(pem_decode("-----BEGIN CERTIFICATE-----\nZm9*\n-----END CERTIFICATE-----\n"), MalformedPem);
    EXPECT_THROW(pem_decode("-----BEGIN CERTIFICATE-----\nZm=v\n-----END CERTIFICATE-----\n"), MalformedPem);
    EXPECT_THROW(pem_decode("-----BEGIN CERTIFICATE-----\n-----END CERTIFICATE-----\n"), MalformedPem);
}

TEST(MockSign, TagAndContentSensitive) {
    const Bytes tbs = encode_tbs(seed7());
    EXPECT_EQ(mock_sign(tbs, "a"), mock_sign(tbs, "a"));
    EXPECT_NE(mock_sign(tbs, "a"), mock_sign(tbs, "b"));
    EXPECT_EQ(mock_sign(tbs, "a").size(), kMockSignatureSize);
}

TEST(MockSign, SingleByteFlipsNeverCollideOnCorpus) {
    const SeedCorpus corpus = generate_corpus(20, 4);
    std::set<Bytes> seen;
    std::size_t total = 0;
    for (const auto &s : corpus.seeds) {
        Bytes tbs = encode_tbs(s.cert);
        const Bytes base = mock_sign(tbs, kRootTag);
        seen.insert(base);
        ++total;
        for (std::size_t i = 0; i < tbs.size(); i += 7) {
            tbs[i] ^= 0x01;
            const Bytes flipped = mock_sign(tbs, kRootTag);
            EXPECT_NE(flipped, base);
            seen.insert(flipped);
            ++total;
            tbs[i] ^= 0x01;
        }
    }
    EXPECT_EQ(seen.size(), total);
}

TEST(Name, CountryEditing) {
    Name n = Name::make("DE", "Org", "cn");
    EXPECT_EQ(n.country(), "DE");
    n.set_country("US");
    EXPECT_EQ(n.country(), "US");
    EXPECT_TRUE(n.remove_country());
    EXPECT_FALSE(n.country().has_value());
    EXPECT_FALSE(n.remove_country());
}
