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

#include <unistd.h>

#include <cmath>

#include "support.hpp"

using namespace certdiff;
using certdiff::testing::rigged_panel;

namespace {

bool is_v4(const Certificate &c) { return c.version == 4; }

const SeedCorpus &standard_corpus() {
    static const SeedCorpus c = generate_corpus(200, 21, "standard");
    return c;
}

const SeedCorpus &mixed_corpus() {
    static const SeedCorpus c = generate_corpus(150, 5);
    return c;
}

// Trains against the version-4 trigger at the default exploration rate.
CampaignResult trained_v4() {
    static const CampaignResult r = [] {
        const Panel panel = rigged_panel(is_v4);
        CampaignConfig cfg;
        cfg.max_episode = 3;
        cfg.rng_seed = 4;
        return run_training(standard_corpus(), panel, cfg);
    }();
    return r;
}

} // namespace

TEST(Campaign, EpisodeLineFormat) {
    EXPECT_EQ(episode_line("train", {2, 500, 37, 0.074}),
              "train    episode 2  corpus 500  discrepancies 37  proportion 7.4%");
}

TEST(Campaign, GreedyFindsRiggedFlawInOneStep) {
    const Panel panel = rigged_panel(is_v4);
    const CampaignResult t = trained_v4();
    const SeedCorpus fresh = generate_corpus(60, 99, "standard");
    const CampaignResult inf = run_inference(fresh, panel, t.params, t.registry, CampaignConfig{});
    EXPECT_EQ(inf.stats.seeds_processed, 60u);
    EXPECT_GE(inf.records.size(), 54u);
    std::size_t one_step = 0;
    for (const auto &r : inf.records) {
        if (r.trace.actions == std::vector<ActionId>{3}) ++one_step;
    }
    EXPECT_GE(one_step, 54u);
}

TEST(Campaign, RandomBaselineMatchesClosedForm) {
    const Panel panel = rigged_panel(is_v4);
    const SeedCorpus corpus = generate_corpus(2000, 8, "standard");
    CampaignConfig cfg;
    cfg.rng_seed = 12;
    const CampaignResult r = run_baseline(corpus, panel, cfg);
    EXPECT_EQ(r.stats.skipped, 0u);
    EXPECT_EQ(r.stats.seeds_processed, 2000u);
    const double expected = 1.0 - std::pow(85.0 / 86.0, 10);
    const double sd = std::sqrt(expected * (1 - expected) / 2000.0);
    EXPECT_NEAR(r.stats.yield(), expected, 4 * sd);
    for (const auto &rec : r.records) EXPECT_EQ(rec.trace.actions.back(), 3);
}

TEST(Campaign, TracesRespectModificationBudget) {
    const Panel panel = default_panel();
    for (std::size_t budget : {0u, 2u, 9u}) {
        CampaignConfig cfg;
        cfg.max_modification = budget;
        cfg.rng_seed = 3;
        const CampaignResult r = run_baseline(mixed_corpus(), panel, cfg);
        EXPECT_LE(r.stats.actions_applied, mixed_corpus().size() * (budget + 1));
        for (const auto &rec : r.records) {
            EXPECT_LE(rec.trace.actions.size(), budget + 1);
            if (rec.trace.actions.empty()) continue;
            EXPECT_TRUE(is_discrepancy(rec.verdicts));
        }
    }
}

TEST(Campaign, YieldRisesAcrossEpisodes) {
    const Panel panel = rigged_panel(is_v4);
    CampaignConfig cfg;
    cfg.max_episode = 4;
    cfg.rng_seed = 2;
    const CampaignResult r = run_training(standard_corpus(), panel, cfg);
    ASSERT_EQ(r.stats.episodes.size(), 4u);
    EXPECT_GT(r.stats.episodes.back().proportion, r.stats.episodes.front().proportion);
    EXPECT_EQ(r.stats.seeds_processed, 4 * standard_corpus().size());
}

TEST(Campaign, InferenceAtLeastMatchesTraining) {
    const Panel panel = rigged_panel(is_v4);
    const CampaignResult t = trained_v4();
    const CampaignResult inf = run_inference(standard_corpus(), panel, t.params, t.registry, CampaignConfig{});
    EXPECT_GE(inf.stats.yield(), t.stats.yield());
}

TEST(Campaign, Deterministic) {
    const Panel panel = default_panel();
    CampaignConfig cfg;
    cfg.max_episode = 2;
    cfg.rng_seed = 17;
    const CampaignResult a = run_training(mixed_corpus(), panel, cfg);
    const CampaignResult b = run_training(mixed_corpus(), panel, cfg);
    EXPECT_EQ(a.records, b.records);
    EXPECT_TRUE(a.params == b.params);

    const CampaignResult fa = run_inference(mixed_corpus(), panel, a.params, a.registry, cfg);
    const CampaignResult fb = run_inference(mixed_corpus(), panel, a.params, a.registry, cfg);
    EXPECT_EQ(fa.records, fb.records);
}

TEST(Campaign, StatsAgreeWithReport) {
    const Panel panel = default_panel();
    CampaignConfig cfg;
    cfg.max_episode = 2;
    cfg.rng_seed = 6;
    const CampaignResult r = run_training(mixed_corpus(), panel, cfg);
    ASSERT_FALSE(r.records.empty());
    const Report rep = make_report(r.records, panel.ids(), r.stats.seeds_processed);
    EXPECT_EQ(rep.discrepancies, r.stats.discrepancies);
    EXPECT_EQ(rep.histogram, r.stats.histogram);
    ASSERT_EQ(rep.types.size(), r.stats.types.size());
    for (std::size_t i = 0; i < rep.types.size(); ++i) {
        EXPECT_EQ(rep.types[i].pattern, r.stats.types[i].pattern);
        EXPECT_EQ(rep.types[i].count, r.stats.types[i].count);
    }
    std::size_t per_episode = 0;
    for (const auto &e : r.stats.episodes) per_episode += e.discrepancies;
    EXPECT_EQ(per_episode, r.stats.discrepancies);
    std::size_t pretest = 0;
    for (const auto &rec : r.records) pretest += rec.trace.actions.empty() ? 1 : 0;
    EXPECT_EQ(pretest, r.stats.pretest_discrepancies);
}

TEST(Campaign, RecordsReplayExactly) {
    const Panel panel = default_panel();
    CampaignConfig cfg;
    cfg.rng_seed = 11;
    const CampaignResult r = run_baseline(mixed_corpus(), panel, cfg);
    ASSERT_FALSE(r.records.empty());
    for (const auto &rec : r.records) {
        const Certificate c = replay(mixed_corpus(), rec.trace, cfg.now);
        EXPECT_EQ(encode_der(c), rec.certificate) << rec.seed_id;
        EXPECT_EQ(panel.verify_all(c, cfg.now), rec.verdicts) << rec.seed_id;
        EXPECT_EQ(rec.backends, panel.ids());
        EXPECT_EQ(rec.timestamp, cfg.now);
        EXPECT_EQ(rec.campaign_seed, 11u);
    }
}

TEST(Campaign, DeltaSchemeWritesOnlyDiscrepancies) {
    const Panel panel = default_panel();
    const auto path = std::filesystem::temp_directory_path() / ("certdiff-delta-" + std::to_string(::getpid()) + ".db");
    std::filesystem::remove(path);
    CampaignResult r;
    {
        DiscrepancyDb db(path);
        CampaignConfig cfg;
        cfg.reward = RewardScheme::kDelta;
        cfg.rng_seed = 9;
        cfg.db = &db;
        r = run_training(mixed_corpus(), panel, cfg);
    }
    const auto stored = load_all(path);
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".idx");
    EXPECT_EQ(stored, r.records);
    EXPECT_EQ(stored.size(), r.stats.discrepancies);
    for (const auto &rec : stored) EXPECT_TRUE(is_discrepancy(rec.verdicts));
}

TEST(Campaign, ProgressCallbackPerEpisode) {
    const Panel panel = rigged_panel(is_v4);
    std::vector<std::string> lines;
    CampaignConfig cfg;
    cfg.max_episode = 2;
    cfg.progress = [&](const std::string &l) { lines.push_back(l); };
    (void)run_baseline(generate_corpus(5, 1, "standard"), panel, cfg);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].rfind("baseline episode 1", 0), 0u);
}
