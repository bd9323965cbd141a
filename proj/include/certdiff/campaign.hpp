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

// Campaign driver. For each episode and each seed (shuffled per episode):
//
//   verify the unmodified seed; a seed that already splits the panel is
//   recorded as is. Otherwise, up to max_modification + 1 times: featurize,
//   pick an action, apply it, verify the mutant, compute the reward and,
//   when training, learn from the transition. The loop ends on a
//   discrepancy (recorded) or when the budget runs out (seed discarded).
//
// Training, greedy inference and the random baseline share this loop and
// differ only in how actions are picked and whether parameters change.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "certdiff/actions.hpp"
#include "certdiff/corpus.hpp"
#include "certdiff/discrepancy_db.hpp"
#include "certdiff/features.hpp"
#include "certdiff/log.hpp"
#include "certdiff/panel.hpp"
#include "certdiff/qnet.hpp"
#include "certdiff/report.hpp"
#include "certdiff/rng.hpp"
#include "certdiff/verdict.hpp"

namespace certdiff {

enum class RewardScheme { kPrimary, kDelta };

struct CampaignConfig {
    std::size_t max_episode = 1;
    std::size_t max_modification = 9;
    double epsilon = 0.1;
    RewardScheme reward = RewardScheme::kPrimary;
    std::uint64_t rng_seed = 1;
    std::int64_t now = kReferenceTime;
    TrainConfig train;
    bool reset_replay_each_episode = false;
    DiscrepancyDb *db = nullptr; // optional sink, written as records appear
    std::function<void(const std::string &)> progress; // per-episode summary lines
};

struct EpisodeStats {
    std::size_t episode = 0;
    std::size_t corpus_size = 0;
    std::size_t discrepancies = 0;
    double proportion = 0;
};

struct CampaignStats {
    std::size_t seeds_processed = 0;
    std::size_t discrepancies = 0;
    std::size_t pretest_discrepancies = 0;
    std::size_t skipped = 0;
    std::size_t actions_applied = 0;
    std::map<std::size_t, std::size_t> histogram; // modifications -> discrepancies
    std::vector<ReportRow> types;
    std::vector<EpisodeStats> episodes;

    [[nodiscard]] double yield() const {
        return seeds_processed == 0 ? 0.0 : static_cast<double>(discrepancies) / static_cast<double>(seeds_processed);
    }
};

struct CampaignResult {
    QParams params;
    LabelRegistry registry;
    std::vector<DiscrepancyRecord> records;
    CampaignStats stats;
};

inline std::string episode_line(std::string_view mode, const EpisodeStats &e) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s episode %zu  corpus %zu  discrepancies %zu  proportion %.1f%%",
                  std::string(mode).c_str(), e.episode, e.corpus_size, e.discrepancies, 100.0 * e.proportion);
    return buf;
}

namespace detail {

    enum class Mode { kTrain, kGreedy, kRandom };

    inline std::string_view mode_name(Mode m) {
        switch (m) {
        case Mode::kTrain: return "train";
        case Mode::kGreedy: return "fuzz";
        case Mode::kRandom: return "baseline";
        }
        return "?";
    }

    class Runner {
      public:
        Runner(Mode mode, const Panel &panel, const CampaignConfig &cfg, QParams params, LabelRegistry reg)
            : mode_(mode), panel_(panel), cfg_(cfg), rng_(cfg.rng_seed), learner_(std::move(params), cfg.train),
              reg_(std::move(reg)), backend_ids_(panel.ids()) {}

        CampaignResult run(const SeedCorpus &corpus, std::size_t episodes) {
            CampaignResult out;
            std::vector<std::size_t> order(corpus.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            for (std::size_t ep = 0; ep < episodes; ++ep) {
                if (cfg_.reset_replay_each_episode) learner_.replay().clear();
                rng_.shuffle(order);
                EpisodeStats es{ep + 1, 0, 0, 0};
                for (std::size_t idx : order) {
                    const Seed &seed = corpus.seeds[idx];
                    try {
                        if (auto rec = run_seed(seed, out.stats)) {
                            ++es.discrepancies;
                            add_record(out, std::move(*rec));
                        }
                        ++es.corpus_size;
                    } catch (const std::exception &e) {
                        ++out.stats.skipped;
                        log::warn("seed " + seed.id + " skipped: " + e.what());
                    }
                }
                es.proportion = es.corpus_size == 0 ? 0.0 : static_cast<double>(es.discrepancies) / es.corpus_size;
                out.stats.seeds_processed += es.corpus_size;
                out.stats.episodes.push_back(es);
                if (cfg_.progress) cfg_.progress(episode_line(mode_name(mode_), es));
            }
            out.params = learner_.params();
            out.registry = reg_;
            return out;
        }

      private:
        void add_record(CampaignResult &out, DiscrepancyRecord rec) {
            auto &st = out.stats;
            ++st.discrepancies;
            ++st.histogram[rec.trace.actions.size()];
            auto it = std::find_if(st.types.begin(), st.types.end(),
                                   [&](const ReportRow &r) { return r.pattern == rec.verdicts; });
            if (it == st.types.end()) {
                st.types.push_back({rec.verdicts, 1});
            } else {
                ++it->count;
            }
            if (cfg_.db != nullptr) cfg_.db->record(rec);
            out.records.push_back(std::move(rec));
        }

        DiscrepancyRecord make_record(const Seed &seed, const ActionTrace &trace, const Certificate &cert,
                                      const VerdictVector &v) const {
            return {seed.id, trace, encode_der(cert), v, backend_ids_, cfg_.now, cfg_.rng_seed};
        }

        ActionId pick(const FeatureVector &s) {
            switch (mode_) {
            case Mode::kRandom:
                return static_cast<ActionId>(rng_.below(kActionCount));
            case Mode::kGreedy:
                return argmax(forward(learner_.params(), s));
            case Mode::kTrain:
                return select_action(forward(learner_.params(), s), cfg_.epsilon, rng_);
            }
            return 0;
        }

        std::optional<DiscrepancyRecord> run_seed(const Seed &seed, CampaignStats &st) {
            const VerdictVector v0 = panel_.verify_all(seed.cert, cfg_.now);
            ActionTrace trace{seed.id, {}};
            if (is_discrepancy(v0)) {
                ++st.pretest_discrepancies;
                return make_record(seed, trace, seed.cert, v0);
            }
            Certificate cert = seed.cert;
            VerdictVector prev = v0;
            FeatureVector s = extract(cert, cfg_.now, reg_);
            for (std::size_t step = 0; step <= cfg_.max_modification; ++step) {
                const ActionId a = pick(s);
                Certificate next = apply(cert, a, cfg_.now);
                trace.actions.push_back(a);
                ++st.actions_applied;
                const VerdictVector v = panel_.verify_all(next, cfg_.now);
                const bool last = step == cfg_.max_modification;
                double reward = 0;
                bool stop = false;
                if (cfg_.reward == RewardScheme::kPrimary) {
                    reward = reward_primary(v);
                    stop = is_discrepancy(v);
                } else {
                    reward = reward_delta(prev, v);
                    stop = delta_should_stop(prev, v);
                }
                const bool terminal = stop || last;
                const FeatureVector s_next = extract(next, cfg_.now, reg_);
                if (mode_ == Mode::kTrain) {
                    Transition t{s, a, reward, terminal ? std::nullopt : std::optional<FeatureVector>(s_next), terminal};
                    learner_.observe(t, rng_);
                }
                if (is_discrepancy(v)) return make_record(seed, trace, next, v);
                if (terminal) return std::nullopt;
                cert = std::move(next);
                prev = v;
                s = s_next;
            }
            return std::nullopt;
        }

        Mode mode_;
        const Panel &panel_;
        CampaignConfig cfg_;
        Rng rng_;
        DqnLearner learner_;
        LabelRegistry reg_;
        std::vector<std::string> backend_ids_;
    };

} // namespace detail

inline CampaignResult run_training(const SeedCorpus &corpus, const Panel &panel, const CampaignConfig &cfg,
                                   std::optional<QParams> initial = std::nullopt,
                                   std::optional<LabelRegistry> registry = std::nullopt) {
    const auto certs = corpus.certificates();
    LabelRegistry reg = registry ? *registry : registry_for(certs);
    QParams params = initial ? *initial : init(cfg.rng_seed);
    detail::Runner runner(detail::Mode::kTrain, panel, cfg, std::move(params), std::move(reg));
    return runner.run(corpus, cfg.max_episode);
}

// Greedy (epsilon = 0) pass with frozen parameters.
inline CampaignResult run_inference(const SeedCorpus &corpus, const Panel &panel, const QParams &params,
                                    const LabelRegistry &reg, const CampaignConfig &cfg) {
    detail::Runner runner(detail::Mode::kGreedy, panel, cfg, params, reg);
    return runner.run(corpus, 1);
}

// Same loop and budget with uniformly random actions.
inline CampaignResult run_baseline(const SeedCorpus &corpus, const Panel &panel, const CampaignConfig &cfg) {
    detail::Runner runner(detail::Mode::kRandom, panel, cfg, init(cfg.rng_seed), LabelRegistry{});
    return runner.run(corpus, cfg.max_episode);
}

} // namespace certdiff
