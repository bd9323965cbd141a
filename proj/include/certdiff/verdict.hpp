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

// Normalized verdict codes and the discrepancy / reward predicates.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace certdiff {

namespace verdict {
    inline constexpr int kValid = 1;
    inline constexpr int kUnknownIssuer = -1;
    inline constexpr int kValidityPeriod = -2;
    inline constexpr int kParsing = -3;
    inline constexpr int kVersion = -4;
    inline constexpr int kAlgorithm = -5;
    inline constexpr int kSignature = -6;
    inline constexpr int kSubjectIssuer = -7;
    inline constexpr int kKeyUsage = -8;
    inline constexpr int kBasicConstraints = -9;
    inline constexpr int kUnknownCriticalExtension = -10;
    inline constexpr int kChain = -11;
    inline constexpr int kSelfSigned = -12;
    inline constexpr int kConnection = -13;
    inline constexpr int kOtherExtension = -14;
    inline constexpr int kOther = -15;
} // namespace verdict

inline constexpr int kAllCodes[] = {1, -1, -2, -3, -4, -5, -6, -7, -8, -9, -10, -11, -12, -13, -14, -15};

inline bool is_verdict_code(int code) { return code == 1 || (code <= -1 && code >= -15); }

inline std::string_view code_name(int code) {
    switch (code) {
    case 1: return "Valid";
    case -1: return "Unknown issuer";
    case -2: return "Validity period error";
    case -3: return "Parsing error";
    case -4: return "Version error";
    case -5: return "Algorithm error";
    case -6: return "Signature error";
    case -7: return "Subject/Issuer error";
    case -8: return "Key usage error";
    case -9: return "Basic constraints error";
    case -10: return "Unknown critical extension";
    case -11: return "Chain error";
    case -12: return "Self sign";
    case -13: return "Connection error";
    case -14: return "Other extension error";
    case -15: return "Other error";
    default: return "?";
    }
}

using VerdictVector = std::vector<int>;

inline bool is_discrepancy(const VerdictVector &v) {
    const bool accepted = std::find(v.begin(), v.end(), verdict::kValid) != v.end();
    const bool rejected = std::any_of(v.begin(), v.end(), [](int c) { return c != verdict::kValid; });
    return accepted && rejected;
}

inline int reward_primary(const VerdictVector &v) { return is_discrepancy(v) ? 100 : -1; }

inline int distinct_categories(const VerdictVector &v) {
    return static_cast<int>(std::set<int>(v.begin(), v.end()).size());
}

inline int reward_delta(const VerdictVector &before, const VerdictVector &after) {
    return distinct_categories(after) - distinct_categories(before);
}

// Stop condition of the category-count scheme.
inline bool delta_should_stop(const VerdictVector &before, const VerdictVector &after) {
    return reward_delta(before, after) > 0 || distinct_categories(after) == static_cast<int>(after.size());
}

inline std::string format_vector(const VerdictVector &v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

} // namespace certdiff
