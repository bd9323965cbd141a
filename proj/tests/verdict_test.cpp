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
using certdiff::testing::resign;
using certdiff::testing::seed7;
using certdiff::testing::taxonomy_fixtures;

namespace {

int strict(const Certificate &c, std::int64_t now = kReferenceTime) {
    return simulate_verify(strict_profile(), c, default_trust_store(), now);
}

int run(const FlawProfile &p, const Certificate &c, std::int64_t now = kReferenceTime) {
    return simulate_verify(p, c, default_trust_store(), now);
}

Certificate expired_hours_ago(std::int64_t hours) {
    auto p = default_params();
    p.not_before_offset = -kYear;
    p.not_after_offset = -hours * 3600;
    return build_synthetic(p, 3);
}

} // namespace

TEST(Verdict, Codes) {
    EXPECT_EQ(std::size(kAllCodes), 16u);
    for (int c : kAllCodes) {
        EXPECT_TRUE(is_verdict_code(c));
        EXPECT_NE(code_name(c), "?");
    }
    EXPECT_FALSE(is_verdict_code(0));
    EXPECT_FALSE(is_verdict_code(-16));
    EXPECT_FALSE(is_verdict_code(2));
}

TEST(Verdict, DiscrepancyPredicateExamples) {
    EXPECT_TRUE(is_discrepancy({1, -14, -6, 1, 1, 1}));
    EXPECT_FALSE(is_discrepancy({1, 1, 1, 1, 1, 1}));
    EXPECT_FALSE(is_discrepancy({-2, -5, -2, -2, -2, -2}));
    EXPECT_FALSE(is_discrepancy({}));
    EXPECT_EQ(reward_primary({1, -14, -6, 1, 1, 1}), 100);
    EXPECT_EQ(reward_primary({1, 1, 1, 1, 1, 1}), -1);
}

TEST(Verdict, DeltaScheme) {
    EXPECT_EQ(reward_delta({1, 1, 1, 1, 1, 1}, {1, -14, -6, 1, 1, 1}), 2);
    EXPECT_EQ(reward_delta({1, -2}, {1, -2}), 0);
    EXPECT_TRUE(delta_should_stop({1, 1, 1, 1, 1, 1}, {1, -2, -3, -4, -5, -6}));
    EXPECT_TRUE(delta_should_stop({1, -2, -3, -4, -5, -6}, {1, -2, -3, -4, -5, -7}));
    EXPECT_FALSE(delta_should_stop({1, -2, 1}, {1, -3, 1}));
    EXPECT_EQ(format_vector({1, -14, -6}), "[1,-14,-6]");
}

TEST(Verdict, DiscrepancyPredicateProperty) {
    Rng rng(10);
    for (int i = 0; i < 100000; ++i) {
        VerdictVector v(2 + rng.below(6));
        for (auto &c : v) c = rng.chance(0.5) ? 1 : kAllCodes[1 + rng.below(15)];
        const bool has_one = std::find(v.begin(), v.end(), 1) != v.end();
        const bool has_other = std::any_of(v.begin(), v.end(), [](int c) { return c != 1; });
        ASSERT_EQ(is_discrepancy(v), has_one && has_other);
        ASSERT_EQ(reward_primary(v), has_one && has_other ? 100 : -1);
    }
}

TEST(Taxonomy, StrictProfileFixtureSuite) {
    std::set<int> covered;
    for (const auto &f : taxonomy_fixtures()) {
        EXPECT_EQ(simulate_verify(strict_profile(), f.der, default_trust_store(), kReferenceTime), f.code) << f.name;
        covered.insert(f.code);
    }
    // Every code except the connection error.
    EXPECT_EQ(covered.size(), 15u);
    EXPECT_EQ(covered.count(verdict::kConnection), 0u);
}

TEST(Taxonomy, UnparseableBytesAreParsingErrors) {
    const Bytes junk{0x30, 0x03, 0x02, 0x01};
    for (const auto &p : shipped_profiles()) EXPECT_EQ(simulate_verify(p, junk, default_trust_store(), kReferenceTime), -3);
}

TEST(Profiles, SignerTagMismatch) {
    Certificate c = seed7();
    c.signature_value = mock_sign(encode_tbs(c), "not-the-root");
    c.dirty = true;
    EXPECT_EQ(strict(c), verdict::kSignature);
    EXPECT_EQ(run(with_switch(strict_profile(), "ignore_signature", true), c), verdict::kValid);
}

TEST(Profiles, TimeLinger) {
    const Certificate c = expired_hours_ago(12);
    FlawProfile linger;
    linger.time_linger_seconds = 86400;
    EXPECT_EQ(run(linger, c), verdict::kValid);
    EXPECT_EQ(strict(c), verdict::kValidityPeriod);
    EXPECT_EQ(run(linger, expired_hours_ago(25)), verdict::kValidityPeriod);
}

TEST(Profiles, LocalTimeOffset) {
    auto p = default_params();
    p.not_before_offset = -kYear;
    p.not_after_offset = 4 * 3600; // expires in 4h GMT
    const Certificate c = build_synthetic(p, 3);
    EXPECT_EQ(strict(c), verdict::kValid);
    EXPECT_EQ(run(profile_by_name("mbedtls-like"), c), verdict::kValidityPeriod);
}

TEST(Profiles, VersionTwoWithExtensions) {
    Certificate c = seed7();
    c.version = 2;
    c = resign(c);
    FlawProfile lenient;
    lenient.accept_v2_with_v3_ext = true;
    EXPECT_EQ(run(lenient, c), verdict::kValid);
    EXPECT_EQ(strict(c), verdict::kVersion);
    EXPECT_EQ(run(profile_by_name("wolfssl-like"), c), verdict::kVersion);
    for (const char *name : {"gnutls-like", "nss-like", "openssl-like", "matrixssl-like"}) {
        EXPECT_EQ(run(profile_by_name(name), c), verdict::kValid) << name;
    }
}

TEST(Profiles, VersionFour) {
    Certificate c = seed7();
    c.version = 4;
    c = resign(c);
    EXPECT_EQ(strict(c), verdict::kVersion);
    EXPECT_EQ(run(profile_by_name("wolfssl-like"), c), verdict::kValid);
}

TEST(Profiles, NegativeSerial) {
    Certificate c = seed7();
    c.serial = SerialNumber::from_int(-77);
    c = resign(c);
    FlawProfile p;
    p.accept_negative_serial = true;
    EXPECT_EQ(run(p, c), verdict::kValid);
    EXPECT_NE(strict(c), verdict::kValid);
    // Other checks still decide.
    c.subject = Name{};
    EXPECT_EQ(run(p, resign(c)), verdict::kSubjectIssuer);
}

TEST(Profiles, LongSerial) {
    const Certificate c = resign(apply(seed7(), 8));
    EXPECT_EQ(strict(c), verdict::kOther);
    EXPECT_EQ(run(profile_by_name("openssl-like"), c), verdict::kValid);
}

TEST(Profiles, FirstErrorVersusMostSevere) {
    // Expired and carrying a pathLen without cA: the extension finding comes
    // last in check order; both strategies pick the validity error here.
    auto p = default_params();
    p.not_after_offset = -kDay;
    p.not_before_offset = -kYear;
    Certificate c = build_synthetic(p, 2);
    c.find_extension(oids::kBasicConstraints)->value = ext::basic_constraints(false, 1);
    c = resign(c);
    EXPECT_EQ(strict(c), verdict::kValidityPeriod);
    EXPECT_EQ(run(with_switch(strict_profile(), "first_error_only", true), c), verdict::kValidityPeriod);
    const auto findings = diagnose(strict_profile(), c, default_trust_store(), kReferenceTime);
    ASSERT_EQ(findings.size(), 2u);
    EXPECT_EQ(findings[1].code, verdict::kBasicConstraints);
}

TEST(Profiles, ShippedSet) {
    const auto profiles = shipped_profiles();
    ASSERT_EQ(profiles.size(), 6u);
    std::set<std::string> names;
    for (const auto &p : profiles) {
        names.insert(p.name);
        EXPECT_EQ(profile_by_name(p.name), p);
        EXPECT_EQ(run(p, seed7()), verdict::kValid) << p.name;
    }
    EXPECT_EQ(names.size(), 6u);
    EXPECT_THROW(profile_by_name("nope"), UnknownProfile);
    EXPECT_THROW(with_switch(strict_profile(), "nope", true), UnknownProfile);
}

TEST(Profiles, AcceptanceSwitchesAreMonotone) {
    const SeedCorpus corpus = generate_corpus(60, 8);
    Rng rng(4);
    std::vector<Certificate> certs;
    for (const auto &s : corpus.seeds) {
        certs.push_back(s.cert);
        certs.push_back(apply(s.cert, static_cast<ActionId>(rng.below(kActionCount))));
    }
    std::vector<FlawProfile> bases = shipped_profiles();
    bases.push_back(strict_profile());
    for (const auto &base : bases) {
        for (auto sw : kAcceptanceSwitches) {
            const FlawProfile wider = with_switch(base, sw, true);
            for (const auto &c : certs) {
                if (run(base, c) == verdict::kValid) {
                    ASSERT_EQ(run(wider, c), verdict::kValid) << base.name << " " << sw;
                }
            }
        }
    }
}

TEST(Profiles, ExercisedSwitchesAttribution) {
    Certificate c = seed7();
    c.version = 4;
    c = resign(c);
    const auto wolf = profile_by_name("wolfssl-like");
    const auto sw = exercised_switches(wolf, encode_der(c), default_trust_store(), kReferenceTime);
    ASSERT_EQ(sw.size(), 1u);
    EXPECT_EQ(sw[0], "accept_v4");
    EXPECT_TRUE(exercised_switches(strict_profile(), encode_der(c), default_trust_store(), kReferenceTime).empty());
}
