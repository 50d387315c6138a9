#include "conet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "conet/cache.hpp"
#include "conet/corpus.hpp"
#include "conet/embeddings.hpp"
#include "conet/error.hpp"
#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/stats.hpp"

namespace conet {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, n) on `workers` threads pulling from a shared
// counter. The first exception thrown by any task is rethrown after joining.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (n == 0) return;
    workers = std::max<std::size_t>(1, std::min(workers, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    }
    if (error) std::rethrow_exception(error);
}

struct StrategyCell {
    Strategy strategy;
    double fraction;
};

std::vector<StrategyCell> strategy_cells(const RunConfig& config) {
    std::vector<StrategyCell> cells;
    for (Strategy s : config.strategies) {
        if (s == Strategy::Original) {
            cells.push_back({s, 0.0});
        } else {
            for (double p : config.fractions) cells.push_back({s, p});
        }
    }
    return cells;
}

// One (text, size, stopword setting) combination.
struct Unit {
    std::size_t text = 0;
    std::size_t size = 0;
    bool filtered = false;

    std::string failure;  // short code, empty while healthy
    std::string failure_detail;
    Document doc;
    ShuffleSet shuffles;
    TopWords top;

    // [network][cell]; network 0 is the original, 1..R the replicas.
    std::vector<std::vector<MetricVector>> metrics;
    std::vector<std::vector<EnrichmentInfo>> enrichment;
};

std::string failure_code(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return "not_converged";
    if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
    return "error";
}

}  // namespace

PipelineInputs load_inputs(const RunConfig& config) {
    config.validate();
    PipelineInputs inputs;
    std::unordered_map<std::string, std::pair<std::size_t, fs::path>> by_id;

    auto add_manifest = [&](const fs::path& path, std::vector<std::size_t>& role) {
        Manifest m;
        try {
            m = load_manifest(path);
        } catch (const Error& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
        for (const auto& entry : m.entries) {
            auto it = by_id.find(entry.text_id);
            if (it != by_id.end()) {
                const auto& existing = inputs.texts[it->second.first];
                std::error_code ec;
                if (!fs::equivalent(it->second.second, entry.path, ec) ||
                    existing.language != entry.language)
                    throw ConfigError("text_id \"" + entry.text_id +
                                      "\" refers to different texts across manifests");
                if (std::find(role.begin(), role.end(), it->second.first) == role.end())
                    role.push_back(it->second.first);
                continue;
            }
            TextInput t;
            t.text_id = entry.text_id;
            t.dataset_tag = entry.dataset_tag;
            t.language = entry.language;
            try {
                t.raw = read_text_file(entry.path);
            } catch (const Error& e) {
                throw ConfigError(path.string() + ": " + e.what());
            }
            by_id.emplace(entry.text_id, std::make_pair(inputs.texts.size(), entry.path));
            role.push_back(inputs.texts.size());
            inputs.texts.push_back(std::move(t));
        }
    };

    add_manifest(config.analysis_manifest, inputs.analysis);
    if (config.syntax_manifest) add_manifest(*config.syntax_manifest, inputs.syntax);
    if (config.semantics_manifest) add_manifest(*config.semantics_manifest, inputs.semantics);
    return inputs;
}

PipelineResult run_pipeline(const RunConfig& config) {
    return run_pipeline(config, load_inputs(config));
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs) {
    config.validate();
    if (inputs.analysis.empty()) throw ConfigError("analysis set has no texts");
    for (const auto* role : {&inputs.analysis, &inputs.syntax, &inputs.semantics})
        for (auto i : *role)
            if (i >= inputs.texts.size()) throw ConfigError("text index out of range");

    StopwordLists stopwords = StopwordLists::builtin();
    if (config.stopword_dir) {
        try {
            stopwords.load_directory(*config.stopword_dir);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    const auto synthetic_seed = config.synthetic_seed();
    if (!synthetic_seed && !fs::is_regular_file(config.embeddings))
        throw ConfigError("embedding file not found: " + config.embeddings);

    std::optional<MetricCache> cache;
    if (config.use_cache) cache.emplace(config.effective_cache_dir());

    const auto cells = strategy_cells(config);
    const std::size_t networks = config.replicas + 1;
    MetricOptions metric_opts;
    metric_opts.damping = config.damping;
    NormalizeOptions norm_opts;
    norm_opts.population_std = config.population_std;
    norm_opts.signed_distance = config.signed_distance;

    // Tokenize each text once.
    const std::size_t text_count = inputs.texts.size();
    std::vector<std::vector<std::string>> tokens(text_count);
    parallel_for(text_count, config.workers,
                 [&](std::size_t t) { tokens[t] = tokenize(inputs.texts[t].raw); });

    // Documents, shuffles and top words per unit.
    std::vector<Unit> units;
    for (std::size_t t = 0; t < text_count; ++t)
        for (std::size_t size : config.sizes)
            for (bool filtered : config.stopword_settings) {
                Unit unit;
                unit.text = t;
                unit.size = size;
                unit.filtered = filtered;
                units.push_back(std::move(unit));
            }

    parallel_for(units.size(), config.workers, [&](std::size_t u) {
        Unit& unit = units[u];
        const auto& text = inputs.texts[unit.text];
        Document full;
        full.text_id = text.text_id;
        full.language = text.language;
        full.tokens = tokens[unit.text];
        try {
            if (config.stopword_order == StopwordOrder::TruncateFirst) {
                unit.doc = truncate(full, unit.size);
                if (unit.filtered) unit.doc = remove_stopwords(unit.doc, stopwords);
            } else {
                unit.doc = unit.filtered ? remove_stopwords(full, stopwords) : full;
                unit.doc = truncate(unit.doc, unit.size);
            }
        } catch (const PreconditionError& e) {
            unit.failure = "no_stopword_list";
            unit.failure_detail = e.what();
            return;
        }
        if (unit.doc.size() < 2) {
            unit.failure = "document_too_short";
            return;
        }
        unit.shuffles = make_shuffles(unit.doc, config.replicas, config.seed);
        unit.top = top_words(build_cooc(unit.doc));
    });

    // Embeddings restricted to the corpus vocabulary.
    std::vector<std::string> vocabulary;
    {
        std::set<std::string> vocab;
        for (const auto& unit : units)
            if (unit.failure.empty()) vocab.insert(unit.doc.tokens.begin(), unit.doc.tokens.end());
        vocabulary.assign(vocab.begin(), vocab.end());
    }
    std::optional<EmbeddingTable> table;
    if (synthetic_seed) {
        table.emplace(synthetic_table(vocabulary, config.embedding_dim, *synthetic_seed));
    } else {
        const std::unordered_set<std::string> restrict(vocabulary.begin(), vocabulary.end());
        try {
            table.emplace(load_vectors(config.embeddings, &restrict));
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }

    const bool needs_candidates = std::any_of(cells.begin(), cells.end(), [](const StrategyCell& c) {
        return c.strategy != Strategy::Original && c.fraction > 0.0;
    });

    std::atomic<std::size_t> hits{0}, misses{0};

    // Metric evaluation, text by text so one similarity index is live at a time.
    for (std::size_t t = 0; t < text_count; ++t) {
        std::vector<std::size_t> mine;
        std::set<std::string> vocab;
        for (std::size_t u = 0; u < units.size(); ++u) {
            if (units[u].text != t || !units[u].failure.empty()) continue;
            mine.push_back(u);
            vocab.insert(units[u].doc.tokens.begin(), units[u].doc.tokens.end());
            units[u].metrics.assign(networks, std::vector<MetricVector>(cells.size()));
            units[u].enrichment.assign(networks, std::vector<EnrichmentInfo>(cells.size()));
        }
        if (mine.empty()) continue;
        std::optional<SimilarityIndex> sims;
        if (needs_candidates) sims.emplace(std::vector<std::string>(vocab.begin(), vocab.end()), *table);

        std::vector<std::string> task_failures(mine.size() * networks);
        parallel_for(mine.size() * networks, config.workers, [&](std::size_t task) {
            Unit& unit = units[mine[task / networks]];
            const std::size_t r = task % networks;
            try {
                const Document& doc = r == 0 ? unit.doc : unit.shuffles.replicas[r - 1];
                const CoocNetwork net = build_cooc(doc);
                const auto top_nodes = top_word_nodes(net, unit.top);
                std::vector<EdgeCandidate> cands;
                if (needs_candidates) cands = candidates(net, *sims);
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    const CoocNetwork enriched = enrich(net, cands, cells[c].strategy, cells[c].fraction);
                    unit.enrichment[r][c] = enriched.enrichment;
                    const SimpleGraph g = to_graph(enriched);
                    std::optional<MetricVector> mv;
                    std::string key;
                    if (cache) {
                        key = metric_cache_key(g, top_nodes, metric_opts);
                        mv = cache->get(key);
                    }
                    if (mv) {
                        ++hits;
                    } else {
                        ++misses;
                        mv = compute_metrics(g, top_nodes, metric_opts);
                        if (cache) cache->put(key, *mv);
                    }
                    unit.metrics[r][c] = std::move(*mv);
                }
            } catch (const Error& e) {
                task_failures[task] = failure_code(e) + "|" + e.what();
            }
        });
        for (std::size_t task = 0; task < task_failures.size(); ++task) {
            Unit& unit = units[mine[task / networks]];
            const auto& f = task_failures[task];
            if (f.empty() || !unit.failure.empty()) continue;
            const auto bar = f.find('|');
            unit.failure = f.substr(0, bar);
            unit.failure_detail = f.substr(bar + 1);
        }
    }

    // Assemble rows.
    PipelineResult result;
    result.cache_hits = hits;
    result.cache_misses = misses;

    using Normalized = std::vector<std::optional<NormalizedMetric>>;  // indexed by text
    std::map<CellKey, Normalized, decltype(&key_less)> per_cell(&key_less);

    for (const auto& unit : units) {
        const auto& text = inputs.texts[unit.text];
        if (!unit.failure.empty()) {
            result.failures.push_back(text.text_id + ": size " + std::to_string(unit.size) + " " +
                                      (unit.filtered ? "filter" : "keep") + ": " + unit.failure +
                                      (unit.failure_detail.empty() ? "" : " (" + unit.failure_detail + ")"));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            for (Metric m : kAllMetrics) {
                for (SummaryMode s : kAllSummaries) {
                    CellKey key{unit.size, unit.filtered, cells[c].strategy, cells[c].fraction, m, s};
                    RecordRow row;
                    row.text_id = text.text_id;
                    row.dataset_tag = text.dataset_tag;
                    row.language = text.language;
                    row.key = key;
                    std::vector<std::string> flags;
                    if (unit.doc.short_document) flags.push_back("short_document");

                    NormalizedMetric nm;
                    if (!unit.failure.empty()) {
                        nm.x_raw = nm.baseline_mean = nm.baseline_std = kNaN;
                        nm.x_norm = nm.eps = nm.d = nm.d_signed = kNaN;
                        nm.undefined_reason = "failed:" + unit.failure;
                    } else {
                        if (unit.enrichment[0][c].shortfall()) flags.push_back("candidate_shortfall");
                        bool replica_shortfall = false;
                        for (std::size_t r = 1; r < networks; ++r)
                            replica_shortfall = replica_shortfall || unit.enrichment[r][c].shortfall();
                        if (replica_shortfall) flags.push_back("replica_candidate_shortfall");

                        const auto& raw = unit.metrics[0][c].at(m, s);
                        std::vector<double> baseline;
                        std::string replica_reason;
                        for (std::size_t r = 1; r < networks; ++r) {
                            const auto& v = unit.metrics[r][c].at(m, s);
                            if (!v.defined() && replica_reason.empty()) replica_reason = v.undefined_reason;
                            baseline.push_back(v.value);
                        }
                        if (!raw.defined()) {
                            nm = normalize(kNaN, baseline, norm_opts);
                            nm.undefined_reason = "text:" + raw.undefined_reason;
                        } else if (!replica_reason.empty()) {
                            nm = normalize(raw.value, baseline, norm_opts);
                            nm.undefined_reason = "replica:" + replica_reason;
                        } else {
                            nm = normalize(raw.value, baseline, norm_opts);
                        }
                    }
                    if (!nm.defined()) flags.push_back("undefined:" + nm.undefined_reason);

                    row.x_raw = nm.x_raw;
                    row.mu_r = nm.baseline_mean;
                    row.sigma_r = nm.baseline_std;
                    row.x_norm = nm.x_norm;
                    row.eps = nm.eps;
                    row.d = nm.d;
                    if (nm.defined()) row.informative = nm.informative;
                    for (std::size_t i = 0; i < flags.size(); ++i) {
                        if (i) row.flags.push_back(';');
                        row.flags += flags[i];
                    }
                    result.records.push_back(std::move(row));

                    auto& slot = per_cell[key];
                    if (slot.empty()) slot.resize(text_count);
                    slot[unit.text] = std::move(nm);
                }
            }
        }
    }

    for (const auto& [key, by_text] : per_cell) {
        std::vector<NormalizedMetric> analysis;
        for (auto t : inputs.analysis)
            if (by_text[t]) analysis.push_back(*by_text[t]);
        if (!analysis.empty()) {
            const auto entry = informativeness(analysis);
            result.informativeness.push_back(
                {key, entry.informativeness, entry.n_t, entry.n_informative, entry.n_undefined});
        }

        if (inputs.syntax.empty() || inputs.semantics.empty()) continue;
        auto collect = [&](const std::vector<std::size_t>& role) {
            std::vector<double> values;
            for (auto t : role) {
                if (!by_text[t] || !by_text[t]->defined()) continue;
                values.push_back(config.variability_source == VariabilitySource::Normalized
                                     ? by_text[t]->x_norm
                                     : by_text[t]->x_raw);
            }
            return values;
        };
        auto cv_or_nan = [](const std::vector<double>& v) {
            try {
                return coefficient_of_variation(v);
            } catch (const PreconditionError&) {
                return kNaN;
            }
        };
        VariabilityRow row;
        row.key = key;
        row.v_syntax = cv_or_nan(collect(inputs.syntax));
        row.v_semantics = cv_or_nan(collect(inputs.semantics));
        row.v_ratio = kNaN;
        if (std::isfinite(row.v_syntax) && std::isfinite(row.v_semantics)) {
            try {
                const auto vr = variability_ratio(collect(inputs.syntax), collect(inputs.semantics));
                row.v_ratio = vr.ratio;
                row.syntax_dominant = vr.syntax_dominant;
            } catch (const PreconditionError&) {
            }
        }
        result.variability.push_back(row);
    }
    return result;
}

}  // namespace conet
