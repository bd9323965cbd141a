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

#include <chrono>

#include "support.hpp"

using namespace certdiff;
using certdiff::testing::fixture;
using certdiff::testing::script;
using certdiff::testing::seed7;

namespace {

std::vector<OutputPattern> openssl_patterns() {
    std::vector<OutputPattern> p;
    p.push_back({0, std::nullopt, std::nullopt, verdict::kValid});
    p.push_back({std::nullopt, std::string("certificate has expired"), std::nullopt, verdict::kValidityPeriod});
    p.push_back({std::nullopt, std::string("certificate is not yet valid"), std::nullopt, verdict::kValidityPeriod});
    p.push_back({std::nullopt, std::string("unable to get local issuer certificate"), std::nullopt, verdict::kUnknownIssuer});
    p.push_back({std::nullopt, std::string("self-signed certificate"), std::nullopt, verdict::kSelfSigned});
    p.push_back({std::nullopt, std::nullopt, std::string("unsupported certificate version|wrong version"), verdict::kVersion});
    ensure_catch_all(p);
    return p;
}

ExternalSpec fake(const std::string &transcript, int status) {
    ExternalSpec s;
    s.command = {"sh", script("fake_verify.sh").string(), fixture(transcript).string(), std::to_string(status), "{cert}"};
    s.patterns = openssl_patterns();
    return s;
}

Bytes fixture_der() {
    const Bytes pem = read_file(fixture("openssl_selfsigned.pem"));
    return pem_decode(std::string_view(reinterpret_cast<const char *>(pem.data()), pem.size()));
}

} // namespace

TEST(Patterns, OrderedFirstMatchAndCatchAll) {
    const auto p = openssl_patterns();
    EXPECT_TRUE(p.back().catch_all());
    EXPECT_EQ(normalize_output(p, 0, "anything"), verdict::kValid);
    EXPECT_EQ(normalize_output(p, 2, "error 10 at 0 depth lookup: certificate has expired"), verdict::kValidityPeriod);
    EXPECT_EQ(normalize_output(p, 2, "error 18: self-signed certificate"), verdict::kSelfSigned);
    EXPECT_EQ(normalize_output(p, 2, "wrong version number"), verdict::kVersion);
    EXPECT_EQ(normalize_output(p, 2, "never seen before"), verdict::kOther);
    std::vector<OutputPattern> none;
    ensure_catch_all(none);
    EXPECT_EQ(none.size(), 1u);
    EXPECT_EQ(normalize_output(none, 0, ""), verdict::kOther);
}

TEST(External, CapturedOpensslTranscriptMapsToValidityError) {
    EXPECT_EQ(external_verify(fake("openssl_verify_expired.txt", 2), encode_der(seed7()), ""), verdict::kValidityPeriod);
}

TEST(External, CleanExitMapsToValid) {
    EXPECT_EQ(external_verify(fake("transcript_ok.txt", 0), encode_der(seed7()), ""), verdict::kValid);
}

TEST(External, NovelOutputIsOtherError) {
    EXPECT_EQ(external_verify(fake("transcript_novel.txt", 139), encode_der(seed7()), ""), verdict::kOther);
}

TEST(External, TimeoutIsConnectionError) {
    ExternalSpec s;
    s.command = {"sleep", "5"};
    s.timeout_seconds = 0.3;
    s.patterns = openssl_patterns();
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = external_verify_detailed(s, encode_der(seed7()), "");
    EXPECT_EQ(out.code, verdict::kConnection);
    EXPECT_TRUE(out.process.timed_out);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3.0);
}

TEST(External, MissingBinary) {
    ExternalSpec s;
    s.command = {"certdiff-no-such-verifier", "{cert}"};
    EXPECT_FALSE(executable_available("certdiff-no-such-verifier"));
    EXPECT_THROW(external_verify(s, encode_der(seed7()), ""), BackendUnavailable);
}

TEST(External, DerFormatAndSubstitution) {
    EXPECT_EQ(substitute("-CAfile={trust}", "c.pem", "t.pem"), "-CAfile=t.pem");
    EXPECT_EQ(substitute("{cert}{cert}", "c", "t"), "cc");
    ExternalSpec s;
    // Exit 0 only when the file holds a DER SEQUENCE rather than PEM text.
    s.command = {"sh", "-c", "head -c 1 \"$0\" | od -An -tx1 | grep -q 30", "{cert}"};
    s.cert_format = "der";
    s.patterns = openssl_patterns();
    EXPECT_EQ(external_verify(s, encode_der(seed7()), ""), verdict::kValid);
    s.cert_format = "pem";
    EXPECT_NE(external_verify(s, encode_der(seed7()), ""), verdict::kValid);
}

TEST(External, RealOpensslVerify) {
    if (!executable_available("openssl")) GTEST_SKIP() << "openssl not installed";
    const Bytes der_bytes = fixture_der();
    ExternalSpec s;
    const std::string trust = fixture("openssl_selfsigned.pem").string();
    s.command = {"openssl", "verify", "-CAfile", "{trust}", "-attime", "1794000000", "{cert}"};
    s.patterns = openssl_patterns();
    EXPECT_EQ(external_verify(s, der_bytes, trust), verdict::kValid);
    s.command[5] = "4102444800";
    EXPECT_EQ(external_verify(s, der_bytes, trust), verdict::kValidityPeriod);
}

TEST(Process, CapturesOutputAndStatus) {
    const auto r = run_process({"sh", "-c", "echo out; echo err >&2; exit 7"}, 5);
    EXPECT_EQ(r.exit_status, 7);
    EXPECT_FALSE(r.timed_out);
    EXPECT_NE(r.output.find("out"), std::string::npos);
    EXPECT_NE(r.output.find("err"), std::string::npos);
    const auto killed = run_process({"sh", "-c", "kill -9 $$"}, 5);
    EXPECT_EQ(killed.exit_status, 128 + 9);
}
