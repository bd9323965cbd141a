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

// File-mode adapter for installed verification utilities.
//
// The certificate is written to a temporary file, the command template is
// run with {cert} and {trust} substituted, and the exit status plus the
// combined stdout/stderr text are matched against an ordered pattern table.
// An entry matches when its exit status (if given) equals the process exit
// status and its substring (if given) occurs in the output, or its regex (if
// given) matches somewhere in the output (ECMAScript syntax). The first
// matching entry decides. Tables always end with a catch-all mapping to -15.
// A run that exceeds its timeout is killed and reported as -13.
#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/der.hpp"
#include "certdiff/log.hpp"
#include "certdiff/pem.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

class BackendUnavailable : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OutputPattern {
    std::optional<int> exit_status;
    std::optional<std::string> contains;
    std::optional<std::string> regex;
    int code = verdict::kOther;

    [[nodiscard]] bool matches(int status, const std::string &output) const {
        if (exit_status && *exit_status != status) return false;
        if (contains && output.find(*contains) == std::string::npos) return false;
        if (regex && !std::regex_search(output, std::regex(*regex))) return false;
        return true;
    }

    [[nodiscard]] bool catch_all() const { return !exit_status && !contains && !regex; }
};

struct ExternalSpec {
    std::vector<std::string> command; // argv template
    std::string cert_format = "pem";  // "pem" or "der"
    double timeout_seconds = 10;
    std::vector<OutputPattern> patterns;
};

inline void ensure_catch_all(std::vector<OutputPattern> &patterns) {
    if (patterns.empty() || !patterns.back().catch_all() || patterns.back().code != verdict::kOther) {
        patterns.push_back(OutputPattern{});
    }
}

inline int normalize_output(const std::vector<OutputPattern> &patterns, int status, const std::string &output) {
    for (const auto &p : patterns) {
        if (p.matches(status, output)) return p.code;
    }
    return verdict::kOther;
}

struct ProcessResult {
    int exit_status = -1; // 128 + signal for signalled children
    bool timed_out = false;
    std::string output;
};

inline bool executable_available(const std::string &program) {
    if (program.find('/') != std::string::npos) {
        return ::access(program.c_str(), X_OK) == 0;
    }
    const char *path = std::getenv("PATH");
    if (path == nullptr) return false;
    std::string_view rest(path);
    while (!rest.empty()) {
        const auto colon = rest.find(':');
        const std::string dir(rest.substr(0, colon));
        const std::string candidate = (dir.empty() ? "." : dir) + "/" + program;
        if (::access(candidate.c_str(), X_OK) == 0) return true;
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    return false;
}

// Runs argv with stdout and stderr captured together.
inline ProcessResult run_process(const std::vector<std::string> &argv, double timeout_seconds) {
    if (argv.empty()) throw std::invalid_argument("empty command");
    int fds[2];
    if (::pipe(fds) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(fds[0]);
        ::close(fds[1]);
        throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(fds[1], STDOUT_FILENO);
        ::dup2(fds[1], STDERR_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        const int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
        std::vector<char *> args;
        for (const auto &a : argv) args.push_back(const_cast<char *>(a.c_str()));
        args.push_back(nullptr);
        ::execvp(args[0], args.data());
        _exit(127);
    }
    ::close(fds[1]);
    ProcessResult r;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    char buf[4096];
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            r.timed_out = true;
            break;
        }
        pollfd pfd{fds[0], POLLIN, 0};
        const int n = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
        if (n < 0 && errno == EINTR) continue;
        if (n == 0) continue;
        const ssize_t got = ::read(fds[0], buf, sizeof buf);
        if (got > 0) {
            r.output.append(buf, static_cast<std::size_t>(got));
        } else if (got == 0 || errno != EINTR) {
            break;
        }
    }
    ::close(fds[0]);
    if (r.timed_out) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status)) {
        r.exit_status = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        r.exit_status = 128 + WTERMSIG(status);
    }
    return r;
}

inline std::string substitute(std::string arg, const std::string &cert_path, const std::string &trust_path) {
    for (const auto &[key, value] : {std::pair<std::string, std::string>{"{cert}", cert_path}, {"{trust}", trust_path}}) {
        for (std::size_t at = arg.find(key); at != std::string::npos; at = arg.find(key, at + value.size())) {
            arg.replace(at, key.size(), value);
        }
    }
    return arg;
}

class TempFile {
  public:
    explicit TempFile(const Bytes &contents, std::string_view suffix) {
        std::string pattern = (std::filesystem::temp_directory_path() / "certdiff-XXXXXX").string() + std::string(suffix);
        const int fd = ::mkstemps(pattern.data(), static_cast<int>(suffix.size()));
        if (fd < 0) throw std::runtime_error(std::string("mkstemps: ") + std::strerror(errno));
        path_ = pattern;
        std::size_t off = 0;
        while (off < contents.size()) {
            const ssize_t n = ::write(fd, contents.data() + off, contents.size() - off);
            if (n <= 0) {
                ::close(fd);
                throw std::runtime_error("cannot write temporary certificate file");
            }
            off += static_cast<std::size_t>(n);
        }
        ::close(fd);
    }
    TempFile(const TempFile &) = delete;
    TempFile &operator=(const TempFile &) = delete;
    ~TempFile() { ::unlink(path_.c_str()); }
    [[nodiscard]] const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

struct ExternalOutcome {
    int code = verdict::kOther;
    ProcessResult process;
};

inline ExternalOutcome external_verify_detailed(const ExternalSpec &spec, ByteView cert_der, const std::string &trust_path) {
    if (spec.command.empty() || !executable_available(spec.command.front())) {
        throw BackendUnavailable("verification utility not found: " +
                                 (spec.command.empty() ? std::string("<empty command>") : spec.command.front()));
    }
    Bytes contents;
    if (spec.cert_format == "der") {
        contents.assign(cert_der.begin(), cert_der.end());
    } else {
        const std::string pem = pem_encode(cert_der);
        contents.assign(pem.begin(), pem.end());
    }
    TempFile file(contents, spec.cert_format == "der" ? ".der" : ".pem");
    std::vector<std::string> argv;
    for (const auto &a : spec.command) argv.push_back(substitute(a, file.path(), trust_path));
    ExternalOutcome out;
    out.process = run_process(argv, spec.timeout_seconds);
    if (out.process.timed_out) {
        log::warn(spec.command.front() + " timed out after " + std::to_string(spec.timeout_seconds) + " s");
        out.code = verdict::kConnection;
        return out;
    }
    if (out.process.exit_status == 127 && !executable_available(argv.front())) {
        throw BackendUnavailable("verification utility not found: " + argv.front());
    }
    out.code = normalize_output(spec.patterns, out.process.exit_status, out.process.output);
    return out;
}

inline int external_verify(const ExternalSpec &spec, ByteView cert_der, const std::string &trust_path) {
    return external_verify_detailed(spec, cert_der, trust_path).code;
}

} // namespace certdiff
