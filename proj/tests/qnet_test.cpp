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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "support.hpp"

using namespace certdiff;

namespace {

// numpy forward pass (tests/oracles/qnet_oracle.py) of init(7) on the
// reference fixture's feature vector.
constexpr double kGoldenQ[kActionCount] = {-0.10374940337494064, 0.14869158149848707, -0.002619335939558279, -0.18666348353923473, -0.0439921583270049, 0.04603059623583073, 0.10055651921798403, -0.20475158102726587, 0.0363174500751983, 0.023102443882583937, -0.07070233766376233, -0.15370604084239547, 0.10375726464593309, -0.10548309861643751, 0.09631386491925191, -0.09893278223428978, -0.04337300219037756, 0.14846684539301747, -0.0012676946242704996, -0.02622008205216354, 0.1336192200090297, 0.04323167133456126, -0.04111460468745863, -0.07494292340923994, 0.015770937858024508, 0.0024562859477521293, -0.1510526632704935, 0.10266869162443515, 0.05965925686801994, -0.16446473635546685, -0.0900474768704068, -0.04026259093648188, 0.017433965942849364, 0.0021366784351532983, 0.1323581327327488, 0.10151617643523028, 0.12283436146832413, -0.029507961856518914, 0.07167455467363842, -0.01615141821295076, -0.1168446997728387, -0.07189894228503013, -0.022176809172810667, -0.2755021451167799, 0.027602948223312503, 0.028702016463172685, -0.019212289174481652, 0.2598397634553645, -0.07783890339290217, -0.08115393160147599, 0.0590038569741476, -0.011626750484361958, 0.007902444287854256, 0.1592460850690809, 0.13221668979215895, 0.010410524590900024, 0.15079704786011605, -0.0957730494758257, 0.05013543680824097, 0.12057185517456057, -0.19718837099075798, 0.0023628755694076187, 0.18157889729548815, 0.02745197255146445, -0.09474232514515003, -0.02511032829941004, -0.02721772504133329, 0.23203571158654213, -0.27776348734166, -0.03001666564179145, -0.0661894501857166, -0.007618208870548617, -0.08005156321519633, 0.0508079541805246, 0.13180881714565715, 0.04346084337722081, -0.1345454990266839, 0.029644892878011253, -0.14080721888965803, 0.007674082124118541, -0.13139948959016315, 0.09180524091074803, -0.05085909183294329, 0.07289581499455791, -0.10181199841585337, -0.15569884369283143};

FeatureVector reference_state() {
    const Certificate c = reference_fixture();
    const std::vector<Certificate> one{c};
    return extract(c, kReferenceTime, registry_for(one));
}

FeatureVector random_state(Rng &rng) {
    FeatureVector v{};
    for (auto &x : v) x = static_cast<std::int32_t>(rng.below(5)) - 1;
    return v;
}

std::vector<Transition> random_batch(Rng &rng, std::size_t n) {
    std::vector<Transition> out;
    for (std::size_t i = 0; i < n; ++i) {
        Transition t;
        t.state = random_state(rng);
        t.action = static_cast<ActionId>(rng.below(kActionCount));
        t.terminal = rng.chance(0.5);
        t.reward = t.terminal ? 100.0 : -1.0;
        if (!t.terminal) t.next_state = random_state(rng);
        out.push_back(t);
    }
    return out;
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("certdiff-qnet-" + std::to_string(::getpid()) + "-" + name);
}

} // namespace

TEST(QNet, InitDeterministicAndShaped) {
    EXPECT_EQ(init(3), init(3));
    EXPECT_NE(init(3), init(4));
    const QParams p = init(3);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(p.layers[k].in, kLayerDims[k]);
        EXPECT_EQ(p.layers[k].out, kLayerDims[k + 1]);
        for (double b : p.layers[k].b) EXPECT_EQ(b, 0.0);
    }
    const QValues q = forward(p, FeatureVector{});
    for (double x : q) EXPECT_TRUE(std::isfinite(x));
}

TEST(QNet, GoldenForward) {
    const QValues q = forward(init(7), reference_state());
    for (std::size_t i = 0; i < kActionCount; ++i) EXPECT_NEAR(q[i], kGoldenQ[i], 1e-12) << i;
    EXPECT_EQ(argmax(q), 47);
}

TEST(QNet, DimensionMismatch) {
    const std::vector<double> short_input(100, 0.0);
    EXPECT_THROW(forward(init(1), short_input), DimensionMismatch);
    QParams bad = init(1);
    bad.layers[2].out = 85;
    EXPECT_THROW(forward(bad, FeatureVector{}), DimensionMismatch);
}

TEST(QNet, DeadReluLeavesOutputBias) {
    QParams p = init(2);
    for (auto &b : p.layers[0].b) b = -1e6;
    for (auto &b : p.layers[2].b) b = 0.25;
    const QValues q = forward(p, reference_state());
    for (double x : q) EXPECT_EQ(x, 0.25);
}

TEST(SelectAction, GreedyAndTieBreak) {
    Rng rng(1);
    QValues q{};
    q[17] = 5;
    EXPECT_EQ(select_action(q, 0.0, rng), 17);
    QValues tie{};
    tie[3] = 2;
    tie[9] = 2;
    EXPECT_EQ(select_action(tie, 0.0, rng), 3);
    QValues scaled = tie;
    for (auto &x : scaled) x *= 37.5;
    EXPECT_EQ(argmax(scaled), argmax(tie));
}

TEST(SelectAction, GreedyDoesNotConsumeRandomness) {
    Rng a(5), b(5);
    QValues q{};
    for (int i = 0; i < 10; ++i) select_action(q, 0.0, a);
    EXPECT_EQ(a.next(), b.next());
}

TEST(SelectAction, UniformUnderFullExploration) {
    Rng rng(2024);
    const std::size_t draws = 100000;
    std::array<std::size_t, kActionCount> counts{};
    QValues q{};
    q[0] = 1;
    for (std::size_t i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(select_action(q, 1.0, rng))];
    const double p = 1.0 / kActionCount;
    const double mean = draws * p;
    const double sigma = std::sqrt(draws * p * (1 - p));
    double chi2 = 0;
    for (auto c : counts) {
        EXPECT_LT(std::abs(static_cast<double>(c) - mean), 5 * sigma);
        chi2 += (c - mean) * (c - mean) / mean;
    }
    // 85 degrees of freedom; 150 is far beyond the 1e-6 tail.
    EXPECT_LT(chi2, 150.0);
}

TEST(TdTarget, Branches) {
    QParams p = init(1);
    Transition terminal{reference_state(), 0, 100.0, std::nullopt, true};
    EXPECT_EQ(td_target(terminal, p, 0.9), 100.0);
    // Make max next-Q exactly 10 through the output bias.
    for (auto &w : p.layers[2].w) w = 0;
    for (auto &b : p.layers[2].b) b = 0;
    p.layers[2].b[4] = 10;
    Transition step{reference_state(), 0, -1.0, reference_state(), false};
    EXPECT_DOUBLE_EQ(td_target(step, p, 0.9), 8.0);
    EXPECT_DOUBLE_EQ(td_target(step, p, 0.0), -1.0);
}

TEST(Train, ZeroLearningRateIsIdentity) {
    Rng rng(3);
    const auto batch = random_batch(rng, 8);
    TrainConfig cfg;
    cfg.learning_rate = 0;
    const QParams p = init(3);
    EXPECT_EQ(train_step(p, batch, cfg).params, p);
}

TEST(Train, GradientMatchesFiniteDifferences) {
    Rng rng(99);
    TrainConfig cfg;
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        QParams p = init(100 + static_cast<std::uint64_t>(trial));
        const QParams target = p;
        const auto batch = random_batch(rng, 4);
        const Gradients g = gradients(p, batch, cfg, target);
        for (std::size_t k = 0; k < 3; ++k) {
            auto &layer = p.layers[k];
            const auto &gl = g.grad.layers[k];
            for (int s = 0; s < 40; ++s) {
                const bool bias = s % 4 == 0;
                auto &vec = bias ? layer.b : layer.w;
                const auto &gvec = bias ? gl.b : gl.w;
                const std::size_t i = rng.below(vec.size());
                const double saved = vec[i];
                const double h = 1e-4;
                vec[i] = saved + h;
                const double up = loss(p, batch, cfg, target);
                vec[i] = saved - h;
                const double down = loss(p, batch, cfg, target);
                vec[i] = saved;
                const double numeric = (up - down) / (2 * h);
                const double analytic = gvec[i];
                const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-2});
                worst = std::max(worst, std::abs(numeric - analytic) / scale);
            }
        }
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(Train, MaxQLossGradient) {
    Rng rng(7);
    TrainConfig cfg;
    cfg.max_q_loss = true;
    QParams p = init(8);
    const auto batch = random_batch(rng, 4);
    const Gradients g = gradients(p, batch, cfg, p);
    const QParams target = p;
    auto &b = p.layers[2].b;
    const auto &gb = g.grad.layers[2].b;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double saved = b[i];
        b[i] = saved + 1e-6;
        const double up = loss(p, batch, cfg, target);
        b[i] = saved - 1e-6;
        const double down = loss(p, batch, cfg, target);
        b[i] = saved;
        EXPECT_NEAR((up - down) / 2e-6, gb[i], 1e-4 * std::max(1.0, std::abs(gb[i])));
    }
}

TEST(Train, FixedTerminalTransitionConverges) {
    const FeatureVector s = reference_state();
    const Transition t{s, 12, 100.0, std::nullopt, true};
    TrainConfig cfg;
    QParams p = init(5);
    std::size_t steps = 0;
    while (steps < 5000 && std::abs(forward(p, s)[12] - 100.0) > 1.0) {
        train_in_place(p, std::span<const Transition>(&t, 1), cfg);
        ++steps;
    }
    EXPECT_LT(steps, 5000u);
    EXPECT_NEAR(forward(p, s)[12], 100.0, 1.0);
}

TEST(Train, OneStateBanditFindsRewardingAction) {
    const FeatureVector s = reference_state();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng env(seed * 7919);
        const ActionId good = static_cast<ActionId>(env.below(kActionCount));
        TrainConfig cfg;
        DqnLearner learner(init(seed), cfg);
        Rng rng(seed);
        for (int step = 0; step < 5000; ++step) {
            const ActionId a = select_action(forward(learner.params(), s), 1.0, rng);
            learner.observe({s, a, a == good ? 100.0 : -1.0, std::nullopt, true}, rng);
        }
        EXPECT_EQ(argmax(forward(learner.params(), s)), good) << "seed " << seed;
    }
}

TEST(Train, NonFiniteLossReportsTransition) {
    Transition t{reference_state(), 3, std::numeric_limits<double>::infinity(), std::nullopt, true};
    TrainConfig cfg;
    try {
        gradients(init(1), std::span<const Transition>(&t, 1), cfg, init(1));
        FAIL() << "expected NonFiniteLoss";
    } catch (const NonFiniteLoss &e) {
        EXPECT_NE(std::string(e.what()).find("action 3"), std::string::npos);
    }
}

TEST(Replay, RingBufferCapacity) {
    ReplayBuffer buf(3);
    for (int i = 0; i < 5; ++i) buf.push({FeatureVector{}, i, 0.0, std::nullopt, true});
    EXPECT_EQ(buf.size(), 3u);
    Rng rng(1);
    for (const auto &t : buf.sample(50, rng)) EXPECT_GE(t.action, 2);
}

TEST(Checkpoint, RoundTrip) {
    const auto corpus = generate_corpus(20, 3);
    const auto certs = corpus.certificates();
    const LabelRegistry reg = registry_for(certs);
    const auto path = temp_path("rt.cdqn");
    save(init(11), reg, path.string());
    const Checkpoint ck = load(path.string());
    EXPECT_EQ(ck.params, init(11));
    EXPECT_EQ(ck.registry, reg);
    EXPECT_TRUE(std::filesystem::exists(path.string() + ".labels"));
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".labels");
}

TEST(Checkpoint, TruncatedAndMismatchedFilesRejected) {
    const std::string blob = serialize_checkpoint(init(1), LabelRegistry{});
    EXPECT_THROW(deserialize_checkpoint(blob.substr(0, blob.size() / 2)), CorruptCheckpoint);
    EXPECT_THROW(deserialize_checkpoint(blob.substr(0, blob.size() - 1)), CorruptCheckpoint);
    EXPECT_THROW(deserialize_checkpoint(blob + "x"), CorruptCheckpoint);
    std::string bad_magic = blob;
    bad_magic[0] = 'X';
    EXPECT_THROW(deserialize_checkpoint(bad_magic), CorruptCheckpoint);
    std::string wrong_dims = blob;
    const std::uint32_t actions = 85;
    std::memcpy(wrong_dims.data() + 4 + 4 * 4, &actions, 4); // output width
    EXPECT_THROW(deserialize_checkpoint(wrong_dims), CorruptCheckpoint);
    const auto path = temp_path("trunc.cdqn");
    std::ofstream(path, std::ios::binary) << blob.substr(0, 100);
    EXPECT_THROW(load(path.string()), CorruptCheckpoint);
    std::filesystem::remove(path);
}
