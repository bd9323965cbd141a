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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "certdiff/certdiff.hpp"

namespace fs = std::filesystem;
using namespace certdiff;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiscrepancy = 10;

struct CliError : std::runtime_error {
    CliError(std::string kind_, const std::string &msg) : std::runtime_error(msg), kind(std::move(kind_)) {}
    std::string kind;
};

struct Settings {
    std::uint64_t seed = 1;
    std::string backends;
    std::string out = "certdiff-out";
    std::size_t episodes = 1;
    double epsilon = 0.1;
    std::size_t max_modification = 9;
    std::string reward = "primary";
    std::string now = "2024-01-01T00:00:00Z";
    std::string mix = "default";
    bool quiet = false;
};

// Flags override the config file, which overrides the defaults above.
void apply_config_file(Settings &s, const std::string &path, const CLI::App &app) {
    std::ifstream f(path);
    if (!f) throw CliError("config", "cannot read " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception &e) {
        throw CliError("config", path + ": " + e.what());
    }
    if (!j.is_object()) throw CliError("config", path + ": top level must be an object");
    auto given = [&](const char *flag) { return app.get_option(flag)->count() > 0; };
    try {
        for (const auto &[key, value] : j.items()) {
            if (key == "seed") {
                if (!given("--seed")) s.seed = value.get<std::uint64_t>();
            } else if (key == "backends") {
                if (!given("--backends")) s.backends = value.get<std::string>();
            } else if (key == "out") {
                if (!given("--out")) s.out = value.get<std::string>();
            } else if (key == "episodes") {
                if (!given("--episodes")) s.episodes = value.get<std::size_t>();
            } else if (key == "epsilon") {
                if (!given("--epsilon")) s.epsilon = value.get<double>();
            } else if (key == "max_modification") {
                if (!given("--max-modification")) s.max_modification = value.get<std::size_t>();
            } else if (key == "reward") {
                if (!given("--reward")) s.reward = value.get<std::string>();
            } else if (key == "now") {
                if (!given("--now")) s.now = value.get<std::string>();
            } else if (key == "mix") {
                if (!given("--mix")) s.mix = value.get<std::string>();
            } else if (key == "quiet") {
                if (!given("--quiet")) s.quiet = value.get<bool>();
            } else {
                throw CliError("config", path + ": unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw CliError("config", path + ": " + e.what());
    }
}

void echo_settings(const Settings &s, const std::string &sub) {
    if (s.quiet) return;
    std::cerr << "certdiff " << sub << ": seed=" << s.seed << " backends=" << (s.backends.empty() ? "default" : s.backends)
              << " out=" << s.out << " episodes=" << s.episodes << " epsilon=" << s.epsilon
              << " max_modification=" << s.max_modification << " reward=" << s.reward << " now=" << s.now
              << " mix=" << s.mix << '\n';
}

Panel make_panel(const Settings &s) { return s.backends.empty() ? default_panel() : load_panel(s.backends); }

std::int64_t reference_now(const Settings &s) {
    try {
        return der::parse_iso8601(s.now);
    } catch (const std::invalid_argument &e) {
        throw CliError("config", e.what());
    }
}

CampaignConfig campaign_config(const Settings &s, DiscrepancyDb *db) {
    CampaignConfig c;
    c.max_episode = s.episodes;
    c.max_modification = s.max_modification;
    if (c.max_modification + 1 > kMaxTraceLength) {
        throw CliError("config", "max_modification must be at most " + std::to_string(kMaxTraceLength - 1));
    }
    c.epsilon = s.epsilon;
    c.train.epsilon = s.epsilon;
    if (s.reward == "primary") {
        c.reward = RewardScheme::kPrimary;
    } else if (s.reward == "delta") {
        c.reward = RewardScheme::kDelta;
    } else {
        throw CliError("config", "reward must be primary or delta, got '" + s.reward + "'");
    }
    c.rng_seed = s.seed;
    c.now = reference_now(s);
    c.db = db;
    c.progress = [](const std::string &line) { std::cout << line << '\n' << std::flush; };
    return c;
}

SeedCorpus load_corpus(const std::string &dir) {
    if (!fs::is_directory(dir)) throw CliError("corpus", "not a directory: " + dir);
    SeedCorpus corpus = ingest_dir(dir);
    if (corpus.excluded > 0) log::warn(std::to_string(corpus.excluded) + " unparseable file(s) excluded from " + dir);
    return corpus;
}

void write_stats(const fs::path &path, std::string_view mode, const CampaignResult &r, const Panel &panel) {
    nlohmann::json j;
    j["format"] = "certdiff-stats";
    j["version"] = 1;
    j["mode"] = mode;
    j["backends"] = panel.ids();
    j["seeds_processed"] = r.stats.seeds_processed;
    j["discrepancies"] = r.stats.discrepancies;
    j["yield"] = r.stats.yield();
    j["pretest_discrepancies"] = r.stats.pretest_discrepancies;
    j["skipped"] = r.stats.skipped;
    j["actions_applied"] = r.stats.actions_applied;
    j["episodes"] = nlohmann::json::array();
    for (const auto &e : r.stats.episodes) {
        j["episodes"].push_back(
            {{"episode", e.episode}, {"corpus", e.corpus_size}, {"discrepancies", e.discrepancies}, {"proportion", e.proportion}});
    }
    nlohmann::json hist = nlohmann::json::object();
    for (const auto &[mods, count] : r.stats.histogram) hist[std::to_string(mods)] = count;
    j["histogram"] = hist;
    write_file(path, j.dump(2) + "\n");
}

void print_total(std::string_view mode, const CampaignResult &r) {
    std::printf("%-8s total      seeds %zu  discrepancies %zu  yield %.1f%%\n", std::string(mode).c_str(),
                r.stats.seeds_processed, r.stats.discrepancies, 100.0 * r.stats.yield());
}

int cmd_campaign(const Settings &s, std::string_view mode, const std::string &corpus_dir, const std::string &checkpoint) {
    const Panel panel = make_panel(s);
    const SeedCorpus corpus = load_corpus(corpus_dir);
    fs::create_directories(s.out);
    DiscrepancyDb db(fs::path(s.out) / "discrepancies.db");
    CampaignConfig cfg = campaign_config(s, &db);
    CampaignResult r;
    if (mode == "train") {
        r = run_training(corpus, panel, cfg);
        const std::string model = (fs::path(s.out) / "model.cdqn").string();
        save(r.params, r.registry, model);
        if (!s.quiet) std::cerr << "checkpoint written to " << model << '\n';
    } else if (mode == "fuzz") {
        if (!fs::exists(checkpoint)) throw CliError("checkpoint", "no such file: " + checkpoint);
        const Checkpoint ck = load(checkpoint);
        r = run_inference(corpus, panel, ck.params, ck.registry, cfg);
    } else {
        r = run_baseline(corpus, panel, cfg);
    }
    write_stats(fs::path(s.out) / ("stats-" + std::string(mode) + ".json"), mode, r, panel);
    print_total(mode, r);
    return 0;
}

int cmd_verify(const Settings &s, const std::string &path) {
    const Panel panel = make_panel(s);
    const Bytes raw = read_file(path);
    Bytes der_bytes = raw;
    if (looks_like_pem(raw)) {
        try {
            der_bytes = pem_decode(std::string_view(reinterpret_cast<const char *>(raw.data()), raw.size()));
        } catch (const MalformedPem &) {
        }
    }
    const VerdictVector v = panel.verify_bytes(der_bytes, reference_now(s));
    const auto ids = panel.ids();
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::printf("%-16s %4d %s\n", ids[i].c_str(), v[i], std::string(code_name(v[i])).c_str());
    }
    return is_discrepancy(v) ? kExitDiscrepancy : 0;
}

int cmd_catalog() {
    for (const auto &a : catalog()) {
        std::printf("%2d  %-10s  %s\n", a.id, std::string(family_name(a.family)).c_str(), a.description.c_str());
    }
    return 0;
}

int cmd_report(const std::string &db_path, const std::string &format, std::size_t corpus_size) {
    if (!fs::exists(db_path)) throw CliError("io", "no such file: " + db_path);
    const auto records = load_all(db_path);
    const Report r = make_report(records, {}, corpus_size);
    std::cout << (format == "jsonl" ? render_jsonl(r) : render_text(r));
    return 0;
}

std::string error_kind(const std::exception &e) {
    if (auto *c = dynamic_cast<const CliError *>(&e)) return c->kind;
    if (dynamic_cast<const EmptyCorpus *>(&e)) return "corpus";
    if (dynamic_cast<const IoError *>(&e)) return "io";
    if (dynamic_cast<const CorruptCheckpoint *>(&e)) return "checkpoint";
    if (dynamic_cast<const InvalidConfig *>(&e)) return "config";
    if (dynamic_cast<const InsufficientBackends *>(&e)) return "backends";
    if (dynamic_cast<const InvalidParams *>(&e)) return "params";
    if (dynamic_cast<const InvalidRecord *>(&e)) return "record";
    if (dynamic_cast<const MalformedDer *>(&e) || dynamic_cast<const MalformedPem *>(&e)) return "parse";
    return "internal";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"certdiff: learning-guided differential testing of X.509 certificate validators"};
    app.require_subcommand(1);
    app.allow_extras(false);

    Settings s;
    std::string config_path;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON config file (flags take precedence)");
    app.add_option("--seed", s.seed, "campaign rng seed");
    app.add_option("--backends", s.backends, "backends config (JSON); default is the six simulated profiles");
    app.add_option("--out", s.out, "output directory");
    app.add_option("--episodes", s.episodes, "training or baseline episodes")->check(CLI::PositiveNumber);
    app.add_option("--epsilon", s.epsilon, "exploration rate while training")->check(CLI::Range(0.0, 1.0));
    app.add_option("--max-modification", s.max_modification, "extra modifications allowed per seed");
    app.add_option("--reward", s.reward, "reward scheme: primary or delta");
    app.add_option("--now", s.now, "reference time, e.g. 2024-01-01T00:00:00Z");
    app.add_option("--mix", s.mix, "synthetic corpus mix: default or standard");
    app.add_flag("--quiet,-q", s.quiet, "suppress warnings and the config echo");
    app.add_flag("--verbose,-v", verbose, "extra logging");

    std::string ingest_dir_arg;
    auto *ingest = app.add_subcommand("ingest", "load a directory of PEM/DER certificates and write normalized PEMs to --out");
    ingest->add_option("dir", ingest_dir_arg)->required();

    std::size_t gen_n = 0;
    auto *gen = app.add_subcommand("gen", "generate a synthetic seed corpus into --out");
    gen->add_option("n", gen_n)->required();

    std::string corpus_dir, checkpoint;
    auto *train = app.add_subcommand("train", "train a model on a corpus; writes model.cdqn, discrepancies.db, stats");
    train->add_option("corpus", corpus_dir)->required();
    auto *fuzz = app.add_subcommand("fuzz", "greedy campaign with a trained checkpoint");
    fuzz->add_option("corpus", corpus_dir)->required();
    fuzz->add_option("--checkpoint", checkpoint)->required();
    auto *baseline = app.add_subcommand("baseline", "campaign with uniformly random actions");
    baseline->add_option("corpus", corpus_dir)->required();

    std::string cert_path;
    auto *verify = app.add_subcommand("verify", "verify one certificate on every backend (exit 10 on discrepancy)");
    verify->add_option("cert", cert_path)->required();

    auto *cat = app.add_subcommand("catalog", "print the mutation action table");

    std::string db_path, format = "text";
    std::size_t corpus_size = 0;
    auto *report = app.add_subcommand("report", "summarize a discrepancy database");
    report->add_option("db", db_path)->required();
    report->add_option("--format", format)->check(CLI::IsMember({"text", "jsonl"}));
    report->add_option("--corpus-size", corpus_size, "seeds processed, for the yield line");

    for (auto *sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (!config_path.empty()) apply_config_file(s, config_path, app);
        log::verbosity() = s.quiet ? 0 : (verbose ? 2 : 1);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub != "catalog" && sub != "report") echo_settings(s, sub);

        if (*ingest) {
            if (!fs::is_directory(ingest_dir_arg)) throw CliError("corpus", "not a directory: " + ingest_dir_arg);
            const SeedCorpus corpus = load_corpus(ingest_dir_arg);
            write_corpus(corpus, s.out);
            std::printf("ingested %zu certificate(s), excluded %zu, written to %s\n", corpus.size(), corpus.excluded,
                        s.out.c_str());
            return 0;
        }
        if (*gen) {
            if (gen_n == 0) throw CliError("corpus", "gen needs at least one certificate");
            const SeedCorpus corpus = generate_corpus(gen_n, s.seed, s.mix, reference_now(s));
            write_corpus(corpus, s.out);
            std::printf("generated %zu certificate(s) into %s\n", corpus.size(), s.out.c_str());
            return 0;
        }
        if (*train) return cmd_campaign(s, "train", corpus_dir, {});
        if (*fuzz) return cmd_campaign(s, "fuzz", corpus_dir, checkpoint);
        if (*baseline) return cmd_campaign(s, "baseline", corpus_dir, {});
        if (*verify) return cmd_verify(s, cert_path);
        if (*cat) return cmd_catalog();
        if (*report) return cmd_report(db_path, format, corpus_size);
    } catch (const std::exception &e) {
        std::cerr << "error: " << error_kind(e) << ": " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
