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

// Strict DER reader/writer primitives. Only the subset needed for X.509
// certificates: single-byte tags, definite minimal lengths, minimal INTEGERs,
// canonical BOOLEANs, OIDs and the two X.509 time forms. BER leniencies
// (indefinite lengths, non-minimal lengths or integers, non-canonical
// booleans) are rejected.
#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace certdiff {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

class MalformedDer : public std::runtime_error {
  public:
    MalformedDer(std::size_t offset, const std::string &reason)
        : std::runtime_error("malformed DER at offset " + std::to_string(offset) + ": " + reason),
          offset_(offset), reason_(reason) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string &reason() const noexcept { return reason_; }

  private:
    std::size_t offset_;
    std::string reason_;
};

class UnsupportedStructure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EncodingOverflow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace der {

    inline constexpr std::uint8_t kBoolean = 0x01;
    inline constexpr std::uint8_t kInteger = 0x02;
    inline constexpr std::uint8_t kBitString = 0x03;
    inline constexpr std::uint8_t kOctetString = 0x04;
    inline constexpr std::uint8_t kNull = 0x05;
    inline constexpr std::uint8_t kOid = 0x06;
    inline constexpr std::uint8_t kUtf8String = 0x0C;
    inline constexpr std::uint8_t kPrintableString = 0x13;
    inline constexpr std::uint8_t kIa5String = 0x16;
    inline constexpr std::uint8_t kUtcTime = 0x17;
    inline constexpr std::uint8_t kGeneralizedTime = 0x18;
    inline constexpr std::uint8_t kSequence = 0x30;
    inline constexpr std::uint8_t kSet = 0x31;

    // Context-specific tag [n]; n < 31.
    constexpr std::uint8_t context(std::uint8_t n, bool constructed) {
        return static_cast<std::uint8_t>(0x80 | (constructed ? 0x20 : 0x00) | n);
    }

    // Largest content length the writer will emit (four length octets).
    inline constexpr std::size_t kMaxLength = 0xFFFFFFFFu;

    struct Tlv {
        std::uint8_t tag = 0;
        std::size_t offset = 0; // absolute offset of the tag byte
        ByteView content;
        ByteView whole; // tag + length + content
    };

    // Sequential reader over a region of a larger buffer. Offsets reported in
    // errors are absolute positions in the original input.
    class Reader {
      public:
        explicit Reader(ByteView data, std::size_t base_offset = 0) : data_(data), base_(base_offset) {}

        [[nodiscard]] bool empty() const noexcept { return pos_ >= data_.size(); }
        [[nodiscard]] std::size_t offset() const noexcept { return base_ + pos_; }

        [[nodiscard]] std::uint8_t peek_tag() const {
            if (empty()) {
                throw MalformedDer(offset(), "unexpected end of data");
            }
            return data_[pos_];
        }

        Tlv next() {
            const std::size_t start = pos_;
            if (empty()) {
                throw MalformedDer(offset(), "unexpected end of data");
            }
            const std::uint8_t tag = data_[pos_++];
            if ((tag & 0x1F) == 0x1F) {
                throw MalformedDer(base_ + start, "high-tag-number form not supported");
            }
            if (empty()) {
                throw MalformedDer(offset(), "missing length");
            }
            const std::uint8_t first = data_[pos_++];
            std::size_t length = 0;
            if (first < 0x80) {
                length = first;
            } else if (first == 0x80) {
                throw MalformedDer(base_ + pos_ - 1, "indefinite length");
            } else {
                const std::size_t count = first & 0x7F;
                if (count > sizeof(std::size_t) || count > 4) {
                    throw MalformedDer(base_ + pos_ - 1, "length too large");
                }
                if (data_.size() - pos_ < count) {
                    throw MalformedDer(offset(), "truncated length");
                }
                if (data_[pos_] == 0) {
                    throw MalformedDer(offset(), "non-minimal length");
                }
                for (std::size_t i = 0; i < count; ++i) {
                    length = (length << 8) | data_[pos_++];
                }
                if (length < 0x80) {
                    throw MalformedDer(base_ + pos_ - count - 1, "non-minimal length");
                }
            }
            if (data_.size() - pos_ < length) {
                throw MalformedDer(base_ + start, "content exceeds available data");
            }
            Tlv tlv;
            tlv.tag = tag;
            tlv.offset = base_ + start;
            tlv.content = data_.subspan(pos_, length);
            tlv.whole = data_.subspan(start, pos_ - start + length);
            pos_ += length;
            return tlv;
        }

        Tlv expect(std::uint8_t tag, std::string_view what) {
            const std::size_t at = offset();
            if (empty()) {
                throw MalformedDer(at, "missing " + std::string(what));
            }
            if (peek_tag() != tag) {
                throw MalformedDer(at, "expected " + std::string(what));
            }
            return next();
        }

        // Reader over the content of a constructed TLV.
        static Reader inside(const Tlv &tlv) { return Reader(tlv.content, tlv.offset + (tlv.whole.size() - tlv.content.size())); }

        void expect_end(std::string_view what) const {
            if (!empty()) {
                throw MalformedDer(offset(), "trailing data in " + std::string(what));
            }
        }

      private:
        ByteView data_;
        std::size_t base_;
        std::size_t pos_ = 0;
    };

    inline void append_length(Bytes &out, std::size_t length) {
        if (length > kMaxLength) {
            throw EncodingOverflow("DER length " + std::to_string(length) + " exceeds writer limit");
        }
        if (length < 0x80) {
            out.push_back(static_cast<std::uint8_t>(length));
            return;
        }
        std::uint8_t buf[4];
        int n = 0;
        for (std::size_t v = length; v != 0; v >>= 8) {
            buf[n++] = static_cast<std::uint8_t>(v & 0xFF);
        }
        out.push_back(static_cast<std::uint8_t>(0x80 | n));
        while (n > 0) {
            out.push_back(buf[--n]);
        }
    }

    inline void append_tlv(Bytes &out, std::uint8_t tag, ByteView content) {
        out.push_back(tag);
        append_length(out, content.size());
        out.insert(out.end(), content.begin(), content.end());
    }

    inline Bytes tlv(std::uint8_t tag, ByteView content) {
        Bytes out;
        out.reserve(content.size() + 6);
        append_tlv(out, tag, content);
        return out;
    }

    inline void append(Bytes &out, ByteView more) { out.insert(out.end(), more.begin(), more.end()); }

    // Minimal two's-complement content octets: no redundant leading 0x00/0xFF.
    inline bool is_minimal_integer(ByteView content) {
        if (content.empty()) {
            return false;
        }
        if (content.size() == 1) {
            return true;
        }
        if (content[0] == 0x00 && (content[1] & 0x80) == 0) {
            return false;
        }
        if (content[0] == 0xFF && (content[1] & 0x80) != 0) {
            return false;
        }
        return true;
    }

    inline Bytes integer_content(std::int64_t value) {
        Bytes raw(8);
        auto u = static_cast<std::uint64_t>(value);
        for (int i = 7; i >= 0; --i) {
            raw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(u & 0xFF);
            u >>= 8;
        }
        std::size_t skip = 0;
        while (skip + 1 < raw.size()) {
            const bool redundant_zero = raw[skip] == 0x00 && (raw[skip + 1] & 0x80) == 0;
            const bool redundant_ff = raw[skip] == 0xFF && (raw[skip + 1] & 0x80) != 0;
            if (!redundant_zero && !redundant_ff) {
                break;
            }
            ++skip;
        }
        return Bytes(raw.begin() + static_cast<std::ptrdiff_t>(skip), raw.end());
    }

    // Strips redundant sign octets so that arbitrary two's-complement input
    // satisfies is_minimal_integer. Empty input becomes zero.
    inline Bytes minimize_integer(Bytes raw) {
        if (raw.empty()) {
            return Bytes{0x00};
        }
        std::size_t skip = 0;
        while (skip + 1 < raw.size()) {
            const bool redundant_zero = raw[skip] == 0x00 && (raw[skip + 1] & 0x80) == 0;
            const bool redundant_ff = raw[skip] == 0xFF && (raw[skip + 1] & 0x80) != 0;
            if (!redundant_zero && !redundant_ff) {
                break;
            }
            ++skip;
        }
        raw.erase(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(skip));
        return raw;
    }

    // Content octets for a non-negative integer given as big-endian magnitude.
    inline Bytes unsigned_integer(Bytes magnitude) {
        if (!magnitude.empty() && (magnitude[0] & 0x80) != 0) {
            magnitude.insert(magnitude.begin(), 0x00);
        }
        return minimize_integer(std::move(magnitude));
    }

    // Decodes a minimal INTEGER that must fit in int64.
    inline std::int64_t read_small_integer(const Tlv &tlv) {
        if (!is_minimal_integer(tlv.content)) {
            throw MalformedDer(tlv.offset, "non-minimal INTEGER");
        }
        if (tlv.content.size() > 8) {
            throw UnsupportedStructure("INTEGER too large for this field");
        }
        std::uint64_t u = (tlv.content[0] & 0x80) ? ~std::uint64_t{0} : 0;
        for (std::uint8_t b : tlv.content) {
            u = (u << 8) | b;
        }
        return static_cast<std::int64_t>(u);
    }

    inline bool read_boolean(const Tlv &tlv) {
        if (tlv.content.size() != 1) {
            throw MalformedDer(tlv.offset, "BOOLEAN must have one content octet");
        }
        if (tlv.content[0] == 0xFF) {
            return true;
        }
        if (tlv.content[0] == 0x00) {
            return false;
        }
        throw MalformedDer(tlv.offset, "non-canonical BOOLEAN");
    }

    // ---- Object identifiers -------------------------------------------------

    inline bool is_valid_oid(std::string_view text) {
        if (text.empty()) {
            return false;
        }
        std::size_t arcs = 0;
        std::size_t pos = 0;
        std::uint64_t first = 0;
        std::uint64_t second = 0;
        while (pos <= text.size()) {
            const std::size_t dot = text.find('.', pos);
            const std::string_view part = text.substr(pos, dot == std::string_view::npos ? text.size() - pos : dot - pos);
            if (part.empty() || part.size() > 19) {
                return false;
            }
            if (part.size() > 1 && part[0] == '0') {
                return false;
            }
            std::uint64_t value = 0;
            for (char c : part) {
                if (c < '0' || c > '9') {
                    return false;
                }
                value = value * 10 + static_cast<std::uint64_t>(c - '0');
            }
            if (arcs == 0) {
                first = value;
            } else if (arcs == 1) {
                second = value;
            }
            ++arcs;
            if (dot == std::string_view::npos) {
                break;
            }
            pos = dot + 1;
        }
        if (arcs < 2 || first > 2) {
            return false;
        }
        if (first < 2 && second > 39) {
            return false;
        }
        return true;
    }

    inline Bytes oid_content(std::string_view text) {
        if (!is_valid_oid(text)) {
            throw std::invalid_argument("invalid OID: " + std::string(text));
        }
        std::vector<std::uint64_t> arcs;
        std::size_t pos = 0;
        while (true) {
            const std::size_t dot = text.find('.', pos);
            const std::string_view part = text.substr(pos, dot == std::string_view::npos ? text.size() - pos : dot - pos);
            std::uint64_t value = 0;
            for (char c : part) {
                value = value * 10 + static_cast<std::uint64_t>(c - '0');
            }
            arcs.push_back(value);
            if (dot == std::string_view::npos) {
                break;
            }
            pos = dot + 1;
        }
        Bytes out;
        auto put = [&out](std::uint64_t v) {
            std::uint8_t buf[10];
            int n = 0;
            do {
                buf[n++] = static_cast<std::uint8_t>(v & 0x7F);
                v >>= 7;
            } while (v != 0);
            while (n > 1) {
                out.push_back(static_cast<std::uint8_t>(buf[--n] | 0x80));
            }
            out.push_back(buf[0]);
        };
        put(arcs[0] * 40 + arcs[1]);
        for (std::size_t i = 2; i < arcs.size(); ++i) {
            put(arcs[i]);
        }
        return out;
    }

    inline Bytes oid(std::string_view text) { return tlv(kOid, oid_content(text)); }

    inline std::string read_oid(const Tlv &tlv) {
        const ByteView c = tlv.content;
        if (c.empty()) {
            throw MalformedDer(tlv.offset, "empty OBJECT IDENTIFIER");
        }
        std::vector<std::uint64_t> values;
        std::uint64_t acc = 0;
        bool fresh = true;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (fresh && c[i] == 0x80) {
                throw MalformedDer(tlv.offset, "non-minimal OID arc");
            }
            if (acc > (std::numeric_limits<std::uint64_t>::max() >> 7)) {
                throw UnsupportedStructure("OID arc exceeds 64 bits");
            }
            acc = (acc << 7) | (c[i] & 0x7F);
            fresh = false;
            if ((c[i] & 0x80) == 0) {
                values.push_back(acc);
                acc = 0;
                fresh = true;
            }
        }
        if (!fresh) {
            throw MalformedDer(tlv.offset, "truncated OID arc");
        }
        std::string out;
        const std::uint64_t head = values[0];
        if (head < 40) {
            out = "0." + std::to_string(head);
        } else if (head < 80) {
            out = "1." + std::to_string(head - 40);
        } else {
            out = "2." + std::to_string(head - 80);
        }
        for (std::size_t i = 1; i < values.size(); ++i) {
            out += '.';
            out += std::to_string(values[i]);
        }
        return out;
    }

    // ---- Time ---------------------------------------------------------------

    struct CivilTime {
        std::int64_t year = 1970;
        int month = 1;
        int day = 1;
        int hour = 0;
        int minute = 0;
        int second = 0;
    };

    // Days since 1970-01-01 for a proleptic Gregorian date.
    constexpr std::int64_t days_from_civil(std::int64_t y, int m, int d) {
        y -= m <= 2 ? 1 : 0;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const auto yoe = static_cast<std::int64_t>(y - era * 400);
        const std::int64_t mp = (m + 9) % 12;
        const std::int64_t doy = (153 * mp + 2) / 5 + d - 1;
        const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + doe - 719468;
    }

    constexpr CivilTime civil_from_seconds(std::int64_t seconds) {
        std::int64_t days = seconds / 86400;
        std::int64_t rem = seconds % 86400;
        if (rem < 0) {
            rem += 86400;
            days -= 1;
        }
        const std::int64_t z = days + 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const std::int64_t doe = z - era * 146097;
        const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const std::int64_t mp = (5 * doy + 2) / 153;
        const auto d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
        const auto m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
        CivilTime c;
        c.year = yoe + era * 400 + (m <= 2 ? 1 : 0);
        c.month = m;
        c.day = d;
        c.hour = static_cast<int>(rem / 3600);
        c.minute = static_cast<int>((rem % 3600) / 60);
        c.second = static_cast<int>(rem % 60);
        return c;
    }

    constexpr std::int64_t seconds_from_civil(const CivilTime &c) {
        return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
    }

    constexpr int days_in_month(std::int64_t year, int month) {
        constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (month == 2) {
            const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
            return leap ? 29 : 28;
        }
        return kDays[month - 1];
    }

    inline std::int64_t read_time(const Tlv &tlv) {
        const ByteView c = tlv.content;
        std::size_t year_digits = 0;
        if (tlv.tag == kUtcTime) {
            year_digits = 2;
        } else if (tlv.tag == kGeneralizedTime) {
            year_digits = 4;
        } else {
            throw MalformedDer(tlv.offset, "expected UTCTime or GeneralizedTime");
        }
        if (c.size() != year_digits + 11 || c.back() != 'Z') {
            throw MalformedDer(tlv.offset, "time must be YYMMDDHHMMSSZ / YYYYMMDDHHMMSSZ");
        }
        auto digits = [&](std::size_t at, std::size_t n) {
            int v = 0;
            for (std::size_t i = at; i < at + n; ++i) {
                if (c[i] < '0' || c[i] > '9') {
                    throw MalformedDer(tlv.offset, "non-digit in time");
                }
                v = v * 10 + (c[i] - '0');
            }
            return v;
        };
        CivilTime t;
        if (year_digits == 2) {
            const int yy = digits(0, 2);
            t.year = yy >= 50 ? 1900 + yy : 2000 + yy;
        } else {
            t.year = digits(0, 4);
        }
        t.month = digits(year_digits, 2);
        t.day = digits(year_digits + 2, 2);
        t.hour = digits(year_digits + 4, 2);
        t.minute = digits(year_digits + 6, 2);
        t.second = digits(year_digits + 8, 2);
        if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > days_in_month(t.year, t.month) || t.hour > 23 ||
            t.minute > 59 || t.second > 59) {
            throw MalformedDer(tlv.offset, "time field out of range");
        }
        return seconds_from_civil(t);
    }

    // UTCTime can only carry 1950..2049.
    inline bool utc_time_representable(std::int64_t seconds) {
        const std::int64_t year = civil_from_seconds(seconds).year;
        return year >= 1950 && year <= 2049;
    }

    inline Bytes time(std::uint8_t tag, std::int64_t seconds) {
        const CivilTime t = civil_from_seconds(seconds);
        if (t.year < 0 || t.year > 9999) {
            throw EncodingOverflow("year " + std::to_string(t.year) + " not representable as GeneralizedTime");
        }
        if (tag == kUtcTime && !utc_time_representable(seconds)) {
            tag = kGeneralizedTime;
        }
        char buf[20];
        if (tag == kUtcTime) {
            std::snprintf(buf, sizeof buf, "%02d%02d%02d%02d%02d%02dZ", static_cast<int>(t.year % 100), t.month, t.day,
                          t.hour, t.minute, t.second);
        } else {
            std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02dZ", static_cast<int>(t.year), t.month, t.day,
                          t.hour, t.minute, t.second);
        }
        const std::string_view s(buf);
        return tlv(tag, ByteView(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()));
    }

    // Parses "YYYY-MM-DDTHH:MM:SSZ" (or a bare date); used for configuration.
    inline std::int64_t parse_iso8601(std::string_view text) {
        int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
        const std::string owned(text);
        int n = std::sscanf(owned.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
        if (n != 3 && n != 6) {
            throw std::invalid_argument("timestamp must look like 2024-01-01T00:00:00Z: " + owned);
        }
        if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59 || s > 59) {
            throw std::invalid_argument("timestamp out of range: " + owned);
        }
        return seconds_from_civil(CivilTime{y, mo, d, h, mi, s});
    }

    inline std::string format_iso8601(std::int64_t seconds) {
        const CivilTime t = civil_from_seconds(seconds);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04lld-%02d-%02dT%02d:%02d:%02dZ", static_cast<long long>(t.year), t.month, t.day,
                      t.hour, t.minute, t.second);
        return buf;
    }

} // namespace der
} // namespace certdiff
