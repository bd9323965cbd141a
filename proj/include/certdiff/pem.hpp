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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "certdiff/der.hpp"

namespace certdiff {

class MalformedPem : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

    constexpr std::string_view kBase64Alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

    inline int base64_value(char c) {
        if (c >= 'A' && c <= 'Z') {
            return c - 'A';
        }
        if (c >= 'a' && c <= 'z') {
            return c - 'a' + 26;
        }
        if (c >= '0' && c <= '9') {
            return c - '0' + 52;
        }
        if (c == '+') {
            return 62;
        }
        if (c == '/') {
            return 63;
        }
        return -1;
    }

} // namespace detail

inline std::string base64_encode(ByteView data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const std::uint32_t v = (std::uint32_t{data[i]} << 16) | (std::uint32_t{data[i + 1]} << 8) | data[i + 2];
        out += detail::kBase64Alphabet[(v >> 18) & 0x3F];
        out += detail::kBase64Alphabet[(v >> 12) & 0x3F];
        out += detail::kBase64Alphabet[(v >> 6) & 0x3F];
        out += detail::kBase64Alphabet[v & 0x3F];
    }
    const std::size_t rest = data.size() - i;
    if (rest == 1) {
        const std::uint32_t v = std::uint32_t{data[i]} << 16;
        out += detail::kBase64Alphabet[(v >> 18) & 0x3F];
        out += detail::kBase64Alphabet[(v >> 12) & 0x3F];
        out += "==";
    } else if (rest == 2) {
        const std::uint32_t v = (std::uint32_t{data[i]} << 16) | (std::uint32_t{data[i + 1]} << 8);
        out += detail::kBase64Alphabet[(v >> 18) & 0x3F];
        out += detail::kBase64Alphabet[(v >> 12) & 0x3F];
        out += detail::kBase64Alphabet[(v >> 6) & 0x3F];
        out += '=';
    }
    return out;
}

// Whitespace is skipped; anything else outside the alphabet is an error.
inline Bytes base64_decode(std::string_view text) {
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
            continue;
        }
        clean += c;
    }
    if (clean.size() % 4 != 0) {
        throw MalformedPem("base64 length is not a multiple of 4");
    }
    Bytes out;
    out.reserve(clean.size() / 4 * 3);
    for (std::size_t i = 0; i < clean.size(); i += 4) {
        int v[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = clean[i + static_cast<std::size_t>(k)];
            if (c == '=') {
                if (i + 4 != clean.size() || k < 2) {
                    throw MalformedPem("misplaced base64 padding");
                }
                v[k] = 0;
                ++pad;
                continue;
            }
            if (pad > 0) {
                throw MalformedPem("misplaced base64 padding");
            }
            v[k] = detail::base64_value(c);
            if (v[k] < 0) {
                throw MalformedPem(std::string("invalid base64 character '") + c + "'");
            }
        }
        const std::uint32_t word = (static_cast<std::uint32_t>(v[0]) << 18) | (static_cast<std::uint32_t>(v[1]) << 12) |
                                   (static_cast<std::uint32_t>(v[2]) << 6) | static_cast<std::uint32_t>(v[3]);
        out.push_back(static_cast<std::uint8_t>((word >> 16) & 0xFF));
        if (pad < 2) {
            out.push_back(static_cast<std::uint8_t>((word >> 8) & 0xFF));
        }
        if (pad < 1) {
            out.push_back(static_cast<std::uint8_t>(word & 0xFF));
        }
    }
    return out;
}

inline constexpr std::string_view kPemBegin = "-----BEGIN CERTIFICATE-----";
inline constexpr std::string_view kPemEnd = "-----END CERTIFICATE-----";

inline std::string pem_encode(ByteView der_bytes) {
    const std::string body = base64_encode(der_bytes);
    std::string out;
    out.reserve(body.size() + body.size() / 64 + 64);
    out += kPemBegin;
    out += '\n';
    for (std::size_t i = 0; i < body.size(); i += 64) {
        out += body.substr(i, 64);
        out += '\n';
    }
    out += kPemEnd;
    out += '\n';
    return out;
}

// Decodes the first CERTIFICATE block in `text`.
inline Bytes pem_decode(std::string_view text) {
    const std::size_t begin = text.find(kPemBegin);
    if (begin == std::string_view::npos) {
        throw MalformedPem("missing '-----BEGIN CERTIFICATE-----' line");
    }
    const std::size_t body_start = begin + kPemBegin.size();
    const std::size_t end = text.find(kPemEnd, body_start);
    if (end == std::string_view::npos) {
        throw MalformedPem("missing '-----END CERTIFICATE-----' line");
    }
    Bytes out = base64_decode(text.substr(body_start, end - body_start));
    if (out.empty()) {
        throw MalformedPem("empty PEM body");
    }
    return out;
}

inline bool looks_like_pem(ByteView data) {
    const std::string_view view(reinterpret_cast<const char *>(data.data()), data.size());
    return view.find(kPemBegin) != std::string_view::npos;
}

} // namespace certdiff
