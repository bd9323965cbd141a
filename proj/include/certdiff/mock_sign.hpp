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

// Stand-in signature scheme: HMAC-SHA256 over the TBS bytes, keyed by a
// signer tag. A trust store maps issuer names to tags in place of CA keys.
#pragma once

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <stdexcept>
#include <string>
#include <string_view>

#include "certdiff/der.hpp"

namespace certdiff {

inline constexpr std::size_t kMockSignatureSize = 32;

inline Bytes mock_sign(ByteView tbs, std::string_view signer_tag) {
    const std::string key = "certdiff-mock-sign:" + std::string(signer_tag);
    Bytes out(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), tbs.data(), tbs.size(), out.data(), &len) ==
        nullptr) {
        throw std::runtime_error("HMAC-SHA256 failed");
    }
    out.resize(len);
    return out;
}

} // namespace certdiff
