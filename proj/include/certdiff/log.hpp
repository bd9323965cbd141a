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

#include <atomic>
#include <iostream>
#include <mutex>
#include <string_view>

namespace certdiff::log {

// 0 quiet (errors only), 1 normal, 2 verbose.
inline std::atomic<int> &verbosity() {
    static std::atomic<int> level{1};
    return level;
}

inline std::mutex &sink_mutex() {
    static std::mutex m;
    return m;
}

inline void warn(std::string_view msg) {
    if (verbosity() < 1) return;
    std::lock_guard<std::mutex> lock(sink_mutex());
    std::cerr << "warning: " << msg << '\n';
}

inline void info(std::string_view msg) {
    if (verbosity() < 1) return;
    std::lock_guard<std::mutex> lock(sink_mutex());
    std::cerr << msg << '\n';
}

} // namespace certdiff::log
