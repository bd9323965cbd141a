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

// The 86 mutation actions. Ids are dense and stable:
//
//    0- 3  version := 1, 2, 3, 4
//    4- 8  serial: negate, := 0, := 1, pad to 21 octets, pad to 37 octets
//    9-11  not_before: -1y, +1y, := now
//   12-14  not_after: -1y, +1y, := now
//   15     swap not_before / not_after
//   16-21  signature algorithm := md5RSA, sha1RSA, sha256RSA, sha512RSA,
//          ecdsa-with-SHA256, Ed25519 (inner and outer)
//   22-24  issuer country := US, := CN, remove
//   25-27  subject country := US, := CN, remove
//   28     subject := issuer
//   29-30  public key: halve, double
//   31-85  11 extension types x {delete, add or replace with the default
//          value, set the alternate value, toggle critical, corrupt value}
//
// Actions never fail. One that has nothing to act on (deleting an absent
// extension, say) returns the input unchanged apart from the dirty flag.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/builder.hpp"
#include "certdiff/certificate.hpp"
#include "certdiff/extensions.hpp"
#include "certdiff/features.hpp"

namespace certdiff {

inline constexpr std::size_t kActionCount = 86;
inline constexpr std::size_t kMaxTraceLength = 10;

using ActionId = int;

enum class ActionFamily { kVersion, kSerial, kValidity, kSignatureAlgorithm, kName, kKey, kExtension };

inline std::string_view family_name(ActionFamily f) {
    switch (f) {
    case ActionFamily::kVersion: return "version";
    case ActionFamily::kSerial: return "serial";
    case ActionFamily::kValidity: return "validity";
    case ActionFamily::kSignatureAlgorithm: return "sig_alg";
    case ActionFamily::kName: return "name";
    case ActionFamily::kKey: return "key";
    case ActionFamily::kExtension: return "extension";
    }
    return "?";
}

struct ActionSpec {
    ActionId id = 0;
    ActionFamily family = ActionFamily::kVersion;
    std::string description;
    std::optional<std::string> target; // extension OID
    bool deterministic = true;
};

class InvalidTrace : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class UnknownSeed : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

struct ActionTrace {
    std::string seed_id;
    std::vector<ActionId> actions;

    bool operator==(const ActionTrace &) const = default;
};

inline constexpr std::array<std::string_view, 2> kActionCountries = {"US", "CN"};
inline constexpr std::array<std::string_view, 6> kActionSignatureAlgorithms = {
    oids::kMd5WithRsa, oids::kSha1WithRsa, oids::kSha256WithRsa, oids::kSha512WithRsa, oids::kEcdsaWithSha256,
    oids::kEd25519,
};
inline constexpr std::array<std::string_view, 5> kExtensionOperations = {
    "delete", "add or replace with default value", "set alternate value", "toggle critical", "corrupt value",
};

inline constexpr ActionId kFirstExtensionAction = 31;

// Registry covering the corpus and every value an action can write.
inline LabelRegistry registry_for(std::span<const Certificate> corpus) {
    return LabelRegistry::build(corpus, kActionCountries, kActionSignatureAlgorithms);
}

inline const std::vector<ActionSpec> &catalog() {
    static const std::vector<ActionSpec> specs = [] {
        std::vector<ActionSpec> out;
        auto add = [&](ActionFamily f, std::string d, std::optional<std::string> target = std::nullopt) {
            out.push_back({static_cast<ActionId>(out.size()), f, std::move(d), std::move(target), true});
        };
        for (int v = 1; v <= 4; ++v) add(ActionFamily::kVersion, "set version to " + std::to_string(v));
        add(ActionFamily::kSerial, "negate serial number");
        add(ActionFamily::kSerial, "set serial number to 0");
        add(ActionFamily::kSerial, "set serial number to 1");
        add(ActionFamily::kSerial, "pad serial number to 21 octets");
        add(ActionFamily::kSerial, "pad serial number to 37 octets");
        add(ActionFamily::kValidity, "move not_before back one year");
        add(ActionFamily::kValidity, "move not_before forward one year");
        add(ActionFamily::kValidity, "set not_before to now");
        add(ActionFamily::kValidity, "move not_after back one year");
        add(ActionFamily::kValidity, "move not_after forward one year");
        add(ActionFamily::kValidity, "set not_after to now");
        add(ActionFamily::kValidity, "swap not_before and not_after");
        const char *alg_names[] = {"md5WithRSAEncryption", "sha1WithRSAEncryption", "sha256WithRSAEncryption",
                                   "sha512WithRSAEncryption", "ecdsa-with-SHA256", "Ed25519"};
        for (const char *n : alg_names) add(ActionFamily::kSignatureAlgorithm, std::string("set signature algorithm to ") + n);
        for (const char *who : {"issuer", "subject"}) {
            add(ActionFamily::kName, std::string("set ") + who + " country to US");
            add(ActionFamily::kName, std::string("set ") + who + " country to CN");
            add(ActionFamily::kName, std::string("remove ") + who + " country");
        }
        add(ActionFamily::kName, "copy issuer name into subject");
        add(ActionFamily::kKey, "halve public key length");
        add(ActionFamily::kKey, "double public key length");
        for (auto oid : ext::kTargeted) {
            for (auto op : kExtensionOperations) {
                add(ActionFamily::kExtension, std::string(ext::short_name(oid)) + ": " + std::string(op),
                    std::string(oid));
            }
        }
        return out;
    }();
    return specs;
}

namespace detail {

    // Exactly `octets` minimal positive octets: 0x5A followed by the original
    // bytes, cycled.
    inline SerialNumber padded_serial(const SerialNumber &s, std::size_t octets) {
        Bytes out(octets);
        out[0] = 0x5A;
        for (std::size_t i = 1; i < octets; ++i) {
            out[i] = s.raw.empty() ? 0 : s.raw[(i - 1) % s.raw.size()];
        }
        return SerialNumber{std::move(out)};
    }

    // Modulus of exactly `bits` bits built by cycling the original bytes.
    inline Bytes resized_modulus(ByteView m, std::size_t bits) {
        Bytes src(m.begin(), m.end());
        while (!src.empty() && src[0] == 0) src.erase(src.begin());
        if (src.empty()) src.push_back(0xC5);
        Bytes out((bits + 7) / 8);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i % src.size()];
        const unsigned top = static_cast<unsigned>((bits - 1) % 8);
        out[0] = static_cast<std::uint8_t>((out[0] & ((1u << top) - 1)) | (1u << top));
        out.back() |= 0x01;
        return out;
    }

    inline void scale_key(SubjectPublicKeyInfo &spki, bool grow) {
        if (spki.algorithm.oid == oids::kRsaEncryption) {
            try {
                der::Reader outer(spki.key);
                auto inner = der::Reader::inside(outer.expect(der::kSequence, "RSAPublicKey"));
                const auto modulus = inner.expect(der::kInteger, "modulus");
                const auto exponent = inner.expect(der::kInteger, "publicExponent");
                const std::size_t bits = spki.key_bits();
                const std::size_t target = grow ? bits * 2 : std::max<std::size_t>(bits / 2, 8);
                Bytes body = der::tlv(der::kInteger, der::unsigned_integer(resized_modulus(modulus.content, target)));
                der::append(body, exponent.whole);
                spki.key = der::tlv(der::kSequence, body);
                return;
            } catch (const std::exception &) {
                // falls through to the raw treatment below
            }
        }
        if (grow) {
            const Bytes copy = spki.key;
            der::append(spki.key, copy);
        } else if (spki.key.size() > 1) {
            spki.key.resize((spki.key.size() + 1) / 2);
        }
    }

    inline void extension_action(Certificate &c, std::string_view oid, std::size_t op) {
        Extension *e = c.find_extension(oid);
        switch (op) {
        case 0:
            std::erase_if(c.extensions, [&](const Extension &x) { return x.oid == oid; });
            break;
        case 1:
        case 2: {
            Bytes value = op == 1 ? ext::default_value(oid) : ext::alternate_value(oid);
            if (e != nullptr) {
                e->value = std::move(value);
            } else {
                c.extensions.push_back({std::string(oid), false, std::move(value)});
            }
            break;
        }
        case 3:
            if (e != nullptr) e->critical = !e->critical;
            break;
        case 4:
            if (e != nullptr) e->value = ext::corrupt_value(oid);
            break;
        default:
            break;
        }
    }

} // namespace detail

// Applies one action to a copy of `cert`. `now` is the clock used by the
// "set to now" actions.
inline Certificate apply(const Certificate &cert, ActionId action, std::int64_t now = kReferenceTime) {
    if (action < 0 || static_cast<std::size_t>(action) >= kActionCount) {
        throw InvalidTrace("action id out of range: " + std::to_string(action));
    }
    Certificate c = cert;
    c.dirty = true;
    switch (action) {
    case 0: case 1: case 2: case 3:
        c.version = action + 1;
        break;
    case 4: c.serial = c.serial.negated(); break;
    case 5: c.serial = SerialNumber::from_int(0); break;
    case 6: c.serial = SerialNumber::from_int(1); break;
    case 7: c.serial = detail::padded_serial(c.serial, 21); break;
    case 8: c.serial = detail::padded_serial(c.serial, 37); break;
    case 9: c.not_before.assign(c.not_before.seconds - kYear); break;
    case 10: c.not_before.assign(c.not_before.seconds + kYear); break;
    case 11: c.not_before.assign(now); break;
    case 12: c.not_after.assign(c.not_after.seconds - kYear); break;
    case 13: c.not_after.assign(c.not_after.seconds + kYear); break;
    case 14: c.not_after.assign(now); break;
    case 15: std::swap(c.not_before, c.not_after); break;
    case 16: case 17: case 18: case 19: case 20: case 21:
        c.signature_algorithm = signature_algorithm_id(kActionSignatureAlgorithms[static_cast<std::size_t>(action - 16)]);
        c.outer_signature_algorithm = c.signature_algorithm;
        break;
    case 22: c.issuer.set_country("US"); break;
    case 23: c.issuer.set_country("CN"); break;
    case 24: c.issuer.remove_country(); break;
    case 25: c.subject.set_country("US"); break;
    case 26: c.subject.set_country("CN"); break;
    case 27: c.subject.remove_country(); break;
    case 28: c.subject = c.issuer; break;
    case 29: detail::scale_key(c.public_key_info, false); break;
    case 30: detail::scale_key(c.public_key_info, true); break;
    default: {
        const auto k = static_cast<std::size_t>(action - kFirstExtensionAction);
        detail::extension_action(c, ext::kTargeted[k / kExtensionOperations.size()], k % kExtensionOperations.size());
        break;
    }
    }
    return c;
}

inline void check_trace(const ActionTrace &trace) {
    if (trace.actions.size() > kMaxTraceLength) {
        throw InvalidTrace("trace has " + std::to_string(trace.actions.size()) + " actions, limit is " +
                           std::to_string(kMaxTraceLength));
    }
    for (ActionId a : trace.actions) {
        if (a < 0 || static_cast<std::size_t>(a) >= kActionCount) {
            throw InvalidTrace("action id out of range: " + std::to_string(a));
        }
    }
}

inline Certificate replay(const Certificate &seed, const ActionTrace &trace, std::int64_t now = kReferenceTime) {
    check_trace(trace);
    Certificate c = seed;
    for (ActionId a : trace.actions) {
        c = apply(c, a, now);
    }
    return c;
}

} // namespace certdiff
