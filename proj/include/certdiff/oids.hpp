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

#include <string_view>

namespace certdiff::oids {

// Name attributes
inline constexpr std::string_view kCountry = "2.5.4.6";
inline constexpr std::string_view kOrganization = "2.5.4.10";
inline constexpr std::string_view kCommonName = "2.5.4.3";

// Key and signature algorithms
inline constexpr std::string_view kRsaEncryption = "1.2.840.113549.1.1.1";
inline constexpr std::string_view kEcPublicKey = "1.2.840.10045.2.1";
inline constexpr std::string_view kPrime256v1 = "1.2.840.10045.3.1.7";
inline constexpr std::string_view kSecp384r1 = "1.3.132.0.34";
inline constexpr std::string_view kMd5WithRsa = "1.2.840.113549.1.1.4";
inline constexpr std::string_view kSha1WithRsa = "1.2.840.113549.1.1.5";
inline constexpr std::string_view kSha256WithRsa = "1.2.840.113549.1.1.11";
inline constexpr std::string_view kSha384WithRsa = "1.2.840.113549.1.1.12";
inline constexpr std::string_view kSha512WithRsa = "1.2.840.113549.1.1.13";
inline constexpr std::string_view kEcdsaWithSha256 = "1.2.840.10045.4.3.2";
inline constexpr std::string_view kEcdsaWithSha384 = "1.2.840.10045.4.3.3";
inline constexpr std::string_view kEd25519 = "1.3.101.112";

// Extensions
inline constexpr std::string_view kSubjectDirectoryAttributes = "2.5.29.9";
inline constexpr std::string_view kSubjectKeyIdentifier = "2.5.29.14";
inline constexpr std::string_view kKeyUsage = "2.5.29.15";
inline constexpr std::string_view kPrivateKeyUsagePeriod = "2.5.29.16";
inline constexpr std::string_view kSubjectAltName = "2.5.29.17";
inline constexpr std::string_view kIssuerAltName = "2.5.29.18";
inline constexpr std::string_view kBasicConstraints = "2.5.29.19";
inline constexpr std::string_view kNameConstraints = "2.5.29.30";
inline constexpr std::string_view kCrlDistributionPoints = "2.5.29.31";
inline constexpr std::string_view kCertificatePolicies = "2.5.29.32";
inline constexpr std::string_view kPolicyMappings = "2.5.29.33";
inline constexpr std::string_view kAuthorityKeyIdentifier = "2.5.29.35";
inline constexpr std::string_view kPolicyConstraints = "2.5.29.36";
inline constexpr std::string_view kExtKeyUsage = "2.5.29.37";
inline constexpr std::string_view kFreshestCrl = "2.5.29.46";
inline constexpr std::string_view kInhibitAnyPolicy = "2.5.29.54";
inline constexpr std::string_view kAuthorityInfoAccess = "1.3.6.1.5.5.7.1.1";
inline constexpr std::string_view kBiometricInfo = "1.3.6.1.5.5.7.1.2";
inline constexpr std::string_view kQcStatements = "1.3.6.1.5.5.7.1.3";
inline constexpr std::string_view kSubjectInfoAccess = "1.3.6.1.5.5.7.1.11";
inline constexpr std::string_view kLogotype = "1.3.6.1.5.5.7.1.12";
inline constexpr std::string_view kTlsFeature = "1.3.6.1.5.5.7.1.24";
inline constexpr std::string_view kOcspNoCheck = "1.3.6.1.5.5.7.48.1.5";
inline constexpr std::string_view kCtSctList = "1.3.6.1.4.1.11129.2.4.2";
inline constexpr std::string_view kCtPoison = "1.3.6.1.4.1.11129.2.4.3";
inline constexpr std::string_view kNetscapeCertType = "2.16.840.1.113730.1.1";
inline constexpr std::string_view kNetscapeComment = "2.16.840.1.113730.1.13";
inline constexpr std::string_view kMsCertTemplateName = "1.3.6.1.4.1.311.20.2";
inline constexpr std::string_view kMsCertTemplate = "1.3.6.1.4.1.311.21.7";
inline constexpr std::string_view kMsApplicationPolicies = "1.3.6.1.4.1.311.21.10";
inline constexpr std::string_view kEntrustVersionInfo = "1.2.840.113533.7.65.0";

// Private-arc extension used by the mutation catalog. Never tracked as a
// feature and never understood by the simulated validators.
inline constexpr std::string_view kPrivateTestExtension = "1.3.6.1.4.1.55555.1.1";

// Extended key usages and policies
inline constexpr std::string_view kServerAuth = "1.3.6.1.5.5.7.3.1";
inline constexpr std::string_view kClientAuth = "1.3.6.1.5.5.7.3.2";
inline constexpr std::string_view kCodeSigning = "1.3.6.1.5.5.7.3.3";
inline constexpr std::string_view kAnyExtendedKeyUsage = "2.5.29.37.0";
inline constexpr std::string_view kAnyPolicy = "2.5.29.32.0";
inline constexpr std::string_view kDomainValidated = "2.23.140.1.2.1";
inline constexpr std::string_view kOrganizationValidated = "2.23.140.1.2.2";
inline constexpr std::string_view kOcsp = "1.3.6.1.5.5.7.48.1";
inline constexpr std::string_view kCaIssuers = "1.3.6.1.5.5.7.48.2";

} // namespace certdiff::oids
