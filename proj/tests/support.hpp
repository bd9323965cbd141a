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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "certdiff/certdiff.hpp"

namespace certdiff::testing {

inline std::filesystem::path fixture(std::string_view name) { return std::filesystem::path(CERTDIFF_FIXTURE_DIR) / name; }

inline std::filesystem::path script(std::string_view name) { return std::filesystem::path(CERTDIFF_SCRIPT_DIR) / name; }

inline Certificate load_fixture(std::string_view name) { return parse_any(read_file(fixture(name))); }

inline Certificate seed7() { return build_synthetic(default_params(), 7); }

// Signs the current fields again, so a fixture carries exactly one defect.
inline Certificate resign(Certificate c, std::string_view tag = kRootTag) {
    c.dirty = true;
    c.signature_value = mock_sign(encode_tbs(c), tag);
    return parse_der(encode_der(c));
}

inline Extension *find(Certificate &c, std::string_view oid) { return c.find_extension(oid); }

// Two in-process backends: the first accepts everything, the second rejects
// whatever matches `trigger`. Only matching mutants split the panel.
inline Panel rigged_panel(std::function<bool(const Certificate &)> trigger) {
    BackendSpec a;
    a.id = "lenient";
    a.kind = BackendKind::kCustom;
    a.custom = [](const Certificate &, ByteView, std::int64_t) { return verdict::kValid; };
    BackendSpec b;
    b.id = "picky";
    b.kind = BackendKind::kCustom;
    b.custom = [trigger = std::move(trigger)](const Certificate &c, ByteView, std::int64_t) {
        return trigger(c) ? verdict::kOther : verdict::kValid;
    };
    return Panel({a, b});
}

struct TaxonomyFixture {
    std::string name;
    int code;
    Bytes der;
};

// One single-defect certificate per code the strict profile can produce.
// Connection errors (-13) only come from external backends.
inline std::vector<TaxonomyFixture> taxonomy_fixtures() {
    std::vector<TaxonomyFixture> out;
    auto add = [&](std::string name, int code, const Certificate &c) { out.push_back({std::move(name), code, encode_der(c)}); };
    auto with_ext = [](Certificate c, std::string_view oid, bool critical, Bytes value) {
        if (Extension *e = c.find_extension(oid)) {
            e->critical = critical;
            e->value = std::move(value);
        } else {
            c.extensions.push_back({std::string(oid), critical, std::move(value)});
        }
        return c;
    };
    const Certificate base = seed7();

    add("valid", verdict::kValid, base);

    {
        auto p = default_params();
        p.issuer_common_name = "Unlisted CA";
        p.signer_tag = "unlisted";
        add("unknown issuer", verdict::kUnknownIssuer, build_synthetic(p, 7));
    }
    {
        auto p = default_params();
        p.not_before_offset = -2 * kYear;
        p.not_after_offset = -kDay;
        add("expired", verdict::kValidityPeriod, build_synthetic(p, 7));
    }
    add("undecodable basicConstraints", verdict::kParsing,
        resign(with_ext(base, oids::kBasicConstraints, true, ext::corrupt_value(oids::kBasicConstraints))));
    {
        Certificate c = base;
        c.version = 1;
        add("v1 with extensions", verdict::kVersion, resign(c));
    }
    {
        Certificate c = base;
        c.signature_algorithm = signature_algorithm_id(oids::kMd5WithRsa);
        c.outer_signature_algorithm = c.signature_algorithm;
        add("md5 signature", verdict::kAlgorithm, resign(c));
    }
    {
        Certificate c = base;
        c.signature_value = mock_sign(encode_tbs(c), "someone-else");
        c.dirty = true;
        add("wrong signer", verdict::kSignature, parse_der(encode_der(c)));
    }
    {
        Certificate c = base;
        c.subject = Name{};
        add("empty subject", verdict::kSubjectIssuer, resign(c));
    }
    add("extKeyUsage without serverAuth", verdict::kKeyUsage,
        resign(with_ext(base, oids::kExtKeyUsage, false, ext::alternate_value(oids::kExtKeyUsage))));
    add("pathLen without cA", verdict::kBasicConstraints,
        resign(with_ext(base, oids::kBasicConstraints, true, ext::basic_constraints(false, 0))));
    add("unknown critical extension", verdict::kUnknownCriticalExtension,
        resign(with_ext(base, oids::kPrivateTestExtension, true, ext::default_value(oids::kPrivateTestExtension))));
    {
        auto p = default_params();
        p.issuer_common_name = std::string(kLegacyCommonName);
        p.signer_tag = std::string(kLegacyTag);
        add("issued by v1 intermediate", verdict::kChain, build_synthetic(p, 7));
    }
    {
        Certificate c = base;
        c.subject = Name::make("FR", "Example Org", "self.example.test");
        c.issuer = c.subject;
        add("self-issued", verdict::kSelfSigned, resign(c, "self"));
    }
    {
        Certificate c = base;
        c.extensions.push_back(c.extensions.back());
        add("duplicate extension", verdict::kOtherExtension, resign(c));
    }
    {
        Certificate c = base;
        c.serial = SerialNumber::from_int(0);
        add("zero serial", verdict::kOther, resign(c));
    }
    return out;
}

} // namespace certdiff::testing
