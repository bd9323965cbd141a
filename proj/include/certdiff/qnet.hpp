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

// 101 -> 100 -> 100 -> 86 fully connected Q-network with ReLU hidden
// layers, trained by plain SGD on the squared temporal-difference error.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "certdiff/actions.hpp"
#include "certdiff/features.hpp"
#include "certdiff/rng.hpp"

namespace certdiff {

inline constexpr std::size_t kHiddenWidth = 100;
inline constexpr std::array<std::size_t, 4> kLayerDims = {kFeatureCount, kHiddenWidth, kHiddenWidth, kActionCount};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NonFiniteLoss : public std::runtime_error {
  public:
    NonFiniteLoss(std::size_t index, const std::string &what) : std::runtime_error(what), index_(index) {}
    [[nodiscard]] std::size_t transition_index() const noexcept { return index_; }

  private:
    std::size_t index_;
};

class CorruptCheckpoint : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w; // out x in, row-major
    std::vector<double> b; // out

    bool operator==(const DenseLayer &) const = default;
};

struct QParams {
    std::array<DenseLayer, 3> layers;

    bool operator==(const QParams &) const = default;

    template <typename F> void for_each_parameter(F &&f) {
        for (auto &l : layers) {
            for (auto &x : l.w) f(x);
            for (auto &x : l.b) f(x);
        }
    }

    [[nodiscard]] std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto &l : layers) n += l.w.size() + l.b.size();
        return n;
    }
};

using QValues = std::array<double, kActionCount>;

struct Transition {
    FeatureVector state{};
    ActionId action = 0;
    double reward = 0;
    std::optional<FeatureVector> next_state;
    bool terminal = true;
};

struct TrainConfig {
    double gamma = 0.9;
    double epsilon = 0.1;
    double learning_rate = 1e-3;
    std::size_t replay_capacity = 10000;
    std::size_t batch_size = 32;
    bool use_target_network = false;
    std::size_t target_sync_interval = 500;
    bool max_q_loss = false;
    double max_grad_norm = 10.0; // global L2 clip on each step; 0 disables
};

// Weights uniform in +-1/sqrt(fan_in), biases zero.
inline QParams init(std::uint64_t seed) {
    Rng rng(seed);
    QParams p;
    for (std::size_t k = 0; k < 3; ++k) {
        auto &l = p.layers[k];
        l.in = kLayerDims[k];
        l.out = kLayerDims[k + 1];
        l.w.resize(l.in * l.out);
        l.b.assign(l.out, 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l.in));
        for (auto &x : l.w) x = rng.uniform(-scale, scale);
    }
    return p;
}

inline std::vector<double> to_input(const FeatureVector &v) { return {v.begin(), v.end()}; }

namespace detail {

    struct ForwardTrace {
        std::array<std::vector<double>, 4> a; // a[0] input, a[1], a[2] post-ReLU, a[3] output
    };

    inline void dense(const DenseLayer &l, const std::vector<double> &x, std::vector<double> &y, bool relu) {
        y.assign(l.out, 0.0);
        for (std::size_t o = 0; o < l.out; ++o) {
            const double *row = &l.w[o * l.in];
            double s = l.b[o];
            for (std::size_t i = 0; i < l.in; ++i) s += row[i] * x[i];
            y[o] = relu && s < 0 ? 0.0 : s;
        }
    }

    inline void check_shape(const QParams &p) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto &l = p.layers[k];
            if (l.in != kLayerDims[k] || l.out != kLayerDims[k + 1] || l.w.size() != l.in * l.out ||
                l.b.size() != l.out) {
                throw DimensionMismatch("layer " + std::to_string(k) + " has the wrong shape");
            }
        }
    }

    inline ForwardTrace run(const QParams &p, std::span<const double> input) {
        if (input.size() != kFeatureCount) {
            throw DimensionMismatch("expected " + std::to_string(kFeatureCount) + " inputs, got " +
                                    std::to_string(input.size()));
        }
        check_shape(p);
        ForwardTrace t;
        t.a[0].assign(input.begin(), input.end());
        dense(p.layers[0], t.a[0], t.a[1], true);
        dense(p.layers[1], t.a[1], t.a[2], true);
        dense(p.layers[2], t.a[2], t.a[3], false);
        return t;
    }

    inline QValues to_qvalues(const std::vector<double> &v) {
        QValues q{};
        std::copy(v.begin(), v.end(), q.begin());
        return q;
    }

} // namespace detail

inline QValues forward(const QParams &p, std::span<const double> input) {
    return detail::to_qvalues(detail::run(p, input).a[3]);
}

inline QValues forward(const QParams &p, const FeatureVector &state) { return forward(p, to_input(state)); }

// Highest value wins; ties go to the lowest id.
inline ActionId argmax(const QValues &q) {
    return static_cast<ActionId>(std::max_element(q.begin(), q.end()) - q.begin());
}

// Draws from rng only when epsilon > 0, so greedy runs leave it untouched.
inline ActionId select_action(const QValues &q, double epsilon, Rng &rng) {
    if (epsilon > 0 && rng.uniform() < epsilon) {
        return static_cast<ActionId>(rng.below(kActionCount));
    }
    return argmax(q);
}

inline double td_target(const Transition &t, const QParams &target_params, double gamma) {
    if (t.terminal || !t.next_state) {
        return t.reward;
    }
    const QValues next = forward(target_params, *t.next_state);
    return t.reward + gamma * *std::max_element(next.begin(), next.end());
}

struct Gradients {
    QParams grad;
    double loss = 0;
};

namespace detail {

    inline QParams zeros_like(const QParams &p) {
        QParams g = p;
        g.for_each_parameter([](double &x) { x = 0; });
        return g;
    }

    inline std::string describe(const Transition &t) {
        return "action " + std::to_string(t.action) + ", reward " + std::to_string(t.reward) +
               (t.terminal ? ", terminal" : ", non-terminal");
    }

} // namespace detail

// Mean squared TD error over `batch` and its gradient. Targets come from
// `target_params` and are treated as constants.
inline Gradients gradients(const QParams &p, std::span<const Transition> batch, const TrainConfig &cfg,
                           const QParams &target_params) {
    if (batch.empty()) {
        throw std::invalid_argument("empty training batch");
    }
    Gradients out{detail::zeros_like(p), 0.0};
    const double n = static_cast<double>(batch.size());
    std::array<std::vector<double>, 4> delta;
    for (std::size_t idx = 0; idx < batch.size(); ++idx) {
        const Transition &t = batch[idx];
        if (t.action < 0 || static_cast<std::size_t>(t.action) >= kActionCount) {
            throw DimensionMismatch("transition action out of range: " + std::to_string(t.action));
        }
        const auto trace = detail::run(p, to_input(t.state));
        const auto &q = trace.a[3];
        const std::size_t chosen =
            cfg.max_q_loss ? static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin())
                                   : static_cast<std::size_t>(t.action);
        const double target = td_target(t, target_params, cfg.gamma);
        const double err = q[chosen] - target;
        const double term = err * err;
        if (!std::isfinite(term)) {
            throw NonFiniteLoss(idx, "non-finite loss at batch index " + std::to_string(idx) + " (" +
                                         detail::describe(t) + ")");
        }
        out.loss += term / n;

        delta[3].assign(kActionCount, 0.0);
        delta[3][chosen] = 2.0 * err / n;
        for (std::size_t k = 3; k-- > 0;) {
            const auto &l = p.layers[k];
            auto &g = out.grad.layers[k];
            const auto &x = trace.a[k];
            const auto &d = delta[k + 1];
            for (std::size_t o = 0; o < l.out; ++o) {
                if (d[o] == 0.0) continue;
                g.b[o] += d[o];
                double *row = &g.w[o * l.in];
                for (std::size_t i = 0; i < l.in; ++i) row[i] += d[o] * x[i];
            }
            if (k == 0) break;
            delta[k].assign(l.in, 0.0);
            for (std::size_t o = 0; o < l.out; ++o) {
                if (d[o] == 0.0) continue;
                const double *row = &l.w[o * l.in];
                for (std::size_t i = 0; i < l.in; ++i) delta[k][i] += d[o] * row[i];
            }
            for (std::size_t i = 0; i < l.in; ++i) {
                if (x[i] <= 0.0) delta[k][i] = 0.0; // ReLU derivative
            }
        }
    }
    return out;
}

inline double loss(const QParams &p, std::span<const Transition> batch, const TrainConfig &cfg,
                   const QParams &target_params) {
    double total = 0;
    for (const auto &t : batch) {
        const QValues q = forward(p, t.state);
        const double pred = cfg.max_q_loss ? *std::max_element(q.begin(), q.end()) : q[static_cast<std::size_t>(t.action)];
        const double err = pred - td_target(t, target_params, cfg.gamma);
        total += err * err;
    }
    return total / static_cast<double>(batch.size());
}

// One SGD step in place; returns the pre-step loss.
inline double train_in_place(QParams &p, std::span<const Transition> batch, const TrainConfig &cfg,
                             const QParams *target_params = nullptr) {
    Gradients g = gradients(p, batch, cfg, target_params ? *target_params : p);
    double step = cfg.learning_rate;
    if (cfg.max_grad_norm > 0) {
        double sq = 0;
        g.grad.for_each_parameter([&](double &x) { sq += x * x; });
        const double norm = std::sqrt(sq);
        if (norm > cfg.max_grad_norm) step *= cfg.max_grad_norm / norm;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        auto &l = p.layers[k];
        const auto &gl = g.grad.layers[k];
        for (std::size_t i = 0; i < l.w.size(); ++i) l.w[i] -= step * gl.w[i];
        for (std::size_t i = 0; i < l.b.size(); ++i) l.b[i] -= step * gl.b[i];
    }
    return g.loss;
}

struct TrainResult {
    QParams params;
    double loss = 0;
};

inline TrainResult train_step(const QParams &p, std::span<const Transition> batch, const TrainConfig &cfg,
                              const QParams *target_params = nullptr) {
    TrainResult r{p, 0};
    r.loss = train_in_place(r.params, batch, cfg, target_params ? target_params : &p);
    return r;
}

class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 10000) : capacity_(std::max<std::size_t>(capacity, 1)) {}

    void push(Transition t) {
        if (items_.size() < capacity_) {
            items_.push_back(std::move(t));
        } else {
            items_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    // Uniform sampling with replacement.
    std::vector<Transition> sample(std::size_t n, Rng &rng) const {
        std::vector<Transition> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n && !items_.empty(); ++i) {
            out.push_back(items_[rng.below(items_.size())]);
        }
        return out;
    }

    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    void clear() {
        items_.clear();
        next_ = 0;
    }

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

// Online learner: one update on each new transition plus a replay batch once
// the buffer holds enough samples.
class DqnLearner {
  public:
    DqnLearner(QParams params, TrainConfig cfg)
        : params_(std::move(params)), target_(params_), cfg_(cfg), replay_(cfg.replay_capacity) {}

    double observe(const Transition &t, Rng &rng) {
        replay_.push(t);
        const QParams *target = cfg_.use_target_network ? &target_ : nullptr;
        double l = train_in_place(params_, std::span<const Transition>(&t, 1), cfg_, target);
        if (replay_.size() >= cfg_.batch_size) {
            const auto batch = replay_.sample(cfg_.batch_size, rng);
            l = train_in_place(params_, batch, cfg_, target);
        }
        ++steps_;
        if (cfg_.use_target_network && cfg_.target_sync_interval > 0 && steps_ % cfg_.target_sync_interval == 0) {
            target_ = params_;
        }
        return l;
    }

    [[nodiscard]] const QParams &params() const noexcept { return params_; }
    [[nodiscard]] const TrainConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    ReplayBuffer &replay() noexcept { return replay_; }

  private:
    QParams params_;
    QParams target_;
    TrainConfig cfg_;
    ReplayBuffer replay_;
    std::size_t steps_ = 0;
};

// ---- Checkpoints -------------------------------------------------------------
//
// "CDQN" | u32 format version | u32 x 4 layer widths | each layer: weights then
// biases as little-endian IEEE doubles | u64 registry length | registry text.

inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

    template <typename T> void put(std::string &out, T v) {
        static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out.append(buf, sizeof(T));
    }

    template <typename T> T take(std::string_view &in) {
        if (in.size() < sizeof(T)) throw CorruptCheckpoint("truncated checkpoint");
        T v;
        std::memcpy(&v, in.data(), sizeof(T));
        in.remove_prefix(sizeof(T));
        return v;
    }

} // namespace detail

inline std::string serialize_checkpoint(const QParams &p, const LabelRegistry &reg) {
    detail::check_shape(p);
    std::string out = "CDQN";
    detail::put<std::uint32_t>(out, kCheckpointVersion);
    for (auto d : kLayerDims) detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (const auto &l : p.layers) {
        for (double x : l.w) detail::put(out, x);
        for (double x : l.b) detail::put(out, x);
    }
    const std::string text = reg.serialize();
    detail::put<std::uint64_t>(out, text.size());
    out += text;
    return out;
}

struct Checkpoint {
    QParams params;
    LabelRegistry registry;
};

inline Checkpoint deserialize_checkpoint(std::string_view in) {
    if (in.substr(0, 4) != "CDQN") throw CorruptCheckpoint("bad magic");
    in.remove_prefix(4);
    const auto version = detail::take<std::uint32_t>(in);
    if (version != kCheckpointVersion) throw CorruptCheckpoint("unsupported checkpoint version " + std::to_string(version));
    for (std::size_t k = 0; k < 4; ++k) {
        const auto d = detail::take<std::uint32_t>(in);
        if (d != kLayerDims[k]) {
            throw CorruptCheckpoint("layer width " + std::to_string(k) + " is " + std::to_string(d) + ", expected " +
                                    std::to_string(kLayerDims[k]));
        }
    }
    Checkpoint cp{init(0), {}};
    for (auto &l : cp.params.layers) {
        for (double &x : l.w) x = detail::take<double>(in);
        for (double &x : l.b) x = detail::take<double>(in);
    }
    const auto len = detail::take<std::uint64_t>(in);
    if (in.size() != len) throw CorruptCheckpoint("registry length does not match file size");
    try {
        cp.registry = LabelRegistry::parse(in);
    } catch (const MalformedRegistry &e) {
        throw CorruptCheckpoint(std::string("registry: ") + e.what());
    }
    bool finite = true;
    cp.params.for_each_parameter([&](double &x) { finite = finite && std::isfinite(x); });
    if (!finite) throw CorruptCheckpoint("non-finite parameter");
    return cp;
}

inline void save(const QParams &p, const LabelRegistry &reg, const std::string &path) {
    const std::string bytes = serialize_checkpoint(p, reg);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
    std::ofstream side(path + ".labels", std::ios::trunc);
    side << reg.serialize();
}

inline Checkpoint load(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

} // namespace certdiff
