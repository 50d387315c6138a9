// conet-probe: batch driver for enriched co-occurrence network statistics.
//
//   conet-probe run --config run.cfg [overrides]
//   conet-probe dump --text file.txt [--language en] [--size N] ...
//
// Exit codes: 0 success, 1 configuration error, 2 completed with per-text failures.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "conet/config.hpp"
#include "conet/corpus.hpp"
#include "conet/embeddings.hpp"
#include "conet/error.hpp"
#include "conet/network.hpp"
#include "conet/pipeline.hpp"
#include "conet/report.hpp"

namespace {

struct RunArgs {
    std::string config;
    std::optional<std::string> sizes, fractions, strategies, stopwords, embeddings, out;
    std::optional<std::size_t> replicas, workers;
    std::optional<std::uint64_t> seed;
    bool signed_distance = false;
    bool no_cache = false;
};

int do_run(const RunArgs& args) {
    conet::RunConfig config;
    try {
        config = conet::load_config(args.config);
        auto set = [&](const char* key, const std::optional<std::string>& v) {
            if (v) conet::apply_setting(config, key, *v, std::filesystem::current_path());
        };
        set("sizes", args.sizes);
        set("fractions", args.fractions);
        set("strategies", args.strategies);
        set("stopwords", args.stopwords);
        set("embeddings", args.embeddings);
        set("out", args.out);
        if (args.replicas) config.replicas = *args.replicas;
        if (args.workers) config.workers = *args.workers;
        if (args.seed) config.seed = *args.seed;
        if (args.signed_distance) config.signed_distance = true;
        if (args.no_cache) config.use_cache = false;
        config.validate();
    } catch (const conet::ConfigError& e) {
        std::cerr << "conet-probe: config error: " << e.what() << '\n';
        return 2;
    } catch (const conet::Error& e) {
        std::cerr << "conet-probe: " << e.what() << '\n';
        return 3;
    }

    conet::PipelineResult result;
    try {
        result = conet::run_pipeline(config);
    } catch (const conet::ConfigError& e) {
        std::cerr << "conet-probe: config error: " << e.what() << '\n';
        return 2;
    } catch (const conet::Error& e) {
        std::cerr << "conet-probe: " << e.what() << '\n';
        return 3;
    }

    try {
        conet::report_csv(result.records, result.informativeness, result.variability, config.out);
    } catch (const conet::Error& e) {
        std::cerr << "conet-probe: " << e.what() << '\n';
        return 3;
    }

    std::cerr << "conet-probe: " << result.records.size() << " records, "
              << result.informativeness.size() << " informativeness rows, "
              << result.variability.size() << " variability rows -> " << config.out.string()
              << " (cache " << result.cache_hits << " hits, " << result.cache_misses
              << " misses)\n";
    for (const auto& f : result.failures) std::cerr << "conet-probe: failed: " << f << '\n';
    return result.failures.empty() ? 0 : 1;
}

struct DumpArgs {
    std::string text;
    std::string text_id = "text";
    std::string language = "en";
    std::size_t size = 0;
    bool filter = false;
    std::string strategy = "original";
    double fraction = 0.0;
    std::string embeddings = "synthetic:0";
    std::size_t dim = 300;
    std::size_t replica = 0;
    std::uint64_t seed = 42;
    std::size_t replicas = 10;
};

int do_dump(const DumpArgs& args) {
    try {
        conet::Document doc = conet::preprocess(conet::read_text_file(args.text), args.language, false,
                                                conet::StopwordLists::builtin(), args.text_id);
        if (args.size) doc = conet::truncate(doc, args.size);
        if (args.filter) doc = conet::remove_stopwords(doc, conet::StopwordLists::builtin());
        if (args.replica > 0) {
            const auto set = conet::make_shuffles(doc, std::max(args.replicas, args.replica), args.seed);
            doc = set.replicas[args.replica - 1];
        }
        const auto net = conet::build_cooc(doc);
        const auto strategy = conet::parse_strategy(args.strategy);

        std::vector<conet::EdgeCandidate> cands;
        if (strategy != conet::Strategy::Original) {
            const std::string prefix = "synthetic:";
            if (args.embeddings.rfind(prefix, 0) == 0) {
                const auto table = conet::synthetic_table(net.words, args.dim,
                                                          std::stoull(args.embeddings.substr(prefix.size())));
                cands = conet::candidates(net, table);
            } else {
                const std::unordered_set<std::string> vocab(net.words.begin(), net.words.end());
                cands = conet::candidates(net, conet::load_vectors(args.embeddings, &vocab));
            }
        }
        conet::write_dump(conet::enrich(net, cands, strategy, args.fraction), std::cout);
    } catch (const std::exception& e) {
        std::cerr << "conet-probe: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Informativeness and variability of enriched word co-occurrence networks"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run the full sweep described by a config file");
    run_cmd->add_option("--config", run.config, "Config file (key = value)")->required();
    run_cmd->add_option("--sizes", run.sizes, "Comma-separated text sizes");
    run_cmd->add_option("--fractions", run.fractions, "Comma-separated P values in percent");
    run_cmd->add_option("--strategies", run.strategies, "Comma-separated: original,global,local");
    run_cmd->add_option("--stopwords", run.stopwords, "keep, filter or both")
        ->check(CLI::IsMember({"keep", "filter", "both"}));
    run_cmd->add_option("--replicas", run.replicas, "Shuffled replicas per text");
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--embeddings", run.embeddings, "Word-vector file or synthetic:<seed>");
    run_cmd->add_option("--workers", run.workers, "Worker threads");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_flag("--signed-distance", run.signed_distance, "Use D = (X-1)/eps instead of |X-1|/eps");
    run_cmd->add_flag("--no-cache", run.no_cache, "Disable the metric cache");

    DumpArgs dump;
    auto* dump_cmd = app.add_subcommand("dump", "Print the (enriched) network of one text as an edge list");
    dump_cmd->add_option("--text", dump.text, "UTF-8 text file")->required();
    dump_cmd->add_option("--text-id", dump.text_id, "Identifier used for shuffle seeding");
    dump_cmd->add_option("--language", dump.language, "Language code");
    dump_cmd->add_option("--size", dump.size, "Truncate to the first N tokens");
    dump_cmd->add_flag("--filter-stopwords", dump.filter, "Remove stopwords after truncation");
    dump_cmd->add_option("--strategy", dump.strategy, "original, global or local");
    dump_cmd->add_option("--P", dump.fraction, "Virtual edges as percent of co-occurrence edges");
    dump_cmd->add_option("--embeddings", dump.embeddings, "Word-vector file or synthetic:<seed>");
    dump_cmd->add_option("--dim", dump.dim, "Dimension of synthetic embeddings");
    dump_cmd->add_option("--replica", dump.replica, "Dump shuffled replica r (1-based) instead");
    dump_cmd->add_option("--seed", dump.seed, "Shuffle seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*run_cmd) return do_run(run);
    return do_dump(dump);
}
