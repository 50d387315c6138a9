// Acceptance suite: one PASS/FAIL line per criterion.
//
//   conet-acceptance <minicorpus-dir> [scratch-dir]
//
// The directional corpus check runs only when CONET_FASTTEXT_VECTORS and
// CONET_GUTENBERG_MANIFEST are set; it never affects the exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "conet/config.hpp"
#include "conet/corpus.hpp"
#include "conet/embeddings.hpp"
#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/pipeline.hpp"
#include "conet/report.hpp"
#include "conet/stats.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace conet;

namespace {

// Tolerances and budgets.
constexpr double kAlphaTol = 1e-10;
constexpr double kAlphaBudgetSeconds = 1.0;
constexpr double kOracleTol = 1e-8;
constexpr double kOracleBudgetSeconds = 30.0;
constexpr double kFixtureTol = 1e-12;
constexpr double kAlgebraTol = 1e-12;
constexpr double kNullMaxInformativeness = 50.0;
constexpr double kNullBudgetSeconds = 120.0;
constexpr double kDeterminismBudgetSeconds = 300.0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(const char* name, const Outcome& o, double seconds) {
    std::printf("%s  %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name, seconds, o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

std::string fmt(const char* f, double a, double b = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

bool close(double a, double b, double tol) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::fabs(a - b) <= tol;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return INFINITY;
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) != std::isnan(b[i])) return INFINITY;
        if (!std::isnan(a[i])) m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------

Outcome disparity() {
    Outcome o;
    double worst = 0;
    for (std::size_t k = 2; k <= 50; ++k) {
        for (int i = 1; i <= 99; ++i) {
            const double pi = i / 100.0;
            const double strength = 2.5;
            worst = std::max(worst, std::fabs(disparity_alpha(pi * strength, strength, k) -
                                              oracle::disparity_alpha_quadrature(pi, k)));
        }
        for (int i = 2; i <= 100; ++i)
            if (disparity_alpha(i / 100.0, 1.0, k) > disparity_alpha((i - 1) / 100.0, 1.0, k))
                o.fail("alpha not monotone in pi at k=" + std::to_string(k));
        const double w = 0.3;
        const double a0 = disparity_alpha(w, w * static_cast<double>(k), k);
        for (std::size_t j = 1; j < k; ++j)
            if (disparity_alpha(w, w * static_cast<double>(k), k) != a0) o.fail("uniform weights give unequal alpha");
    }
    // uniform weights through the library's union-graph path: a star whose
    // centre has equal-weight edges must give every edge the same alpha
    {
        CoocNetwork net;
        net.words = {"hub", "a", "b", "c", "d"};
        net.frequencies.assign(5, 1);
        std::vector<EdgeCandidate> cands;
        for (NodeId v = 1; v < 5; ++v) cands.push_back({{0, v}, 0.5, std::nullopt});
        const auto sig = local_significance(net, cands);
        for (double s : sig)
            if (s != sig.front()) o.fail("uniform star edges differ in significance");
    }
    if (worst > kAlphaTol) o.fail(fmt("max |alpha - quadrature| = %.3g", worst));
    if (o.pass) o.detail = fmt("max |alpha - quadrature| = %.2g over k=2..50, pi=0.01..0.99", worst);
    return o;
}

Outcome metric_oracles(std::size_t& graphs) {
    Outcome o;
    auto family = oracle::small_graph_family(6, 8, 100);
    auto random = oracle::random_graph_family(100, 30, 30);
    family.insert(family.end(), random.begin(), random.end());
    graphs = family.size();
    double worst = 0;
    std::size_t index = 0;
    for (const auto& og : family) {
        const auto g = og.simple();
        auto note = [&](const char* metric, double diff) {
            worst = std::max(worst, diff);
            if (!(diff <= kOracleTol)) o.fail(std::string(metric) + " differs on graph #" + std::to_string(index));
        };
        try {
            note("clustering", max_diff(clustering_all(g), oracle::clustering(og)));
            if (oracle::largest_component(og).size() >= 2) {
                note("avg_shortest_path", std::fabs(avg_shortest_path(g) - oracle::avg_shortest_path(og)));
                note("closeness", max_diff(closeness_all(g), oracle::closeness(og)));
                note("betweenness", max_diff(betweenness_all(g), oracle::betweenness(og)));
            }
            note("pagerank", max_diff(pagerank(g), oracle::pagerank(og)));
            if (g.edge_count() > 0) note("eigenvector", max_diff(eigenvector(g), oracle::eigenvector(og)));
        } catch (const std::exception& e) {
            o.fail("graph #" + std::to_string(index) + ": " + e.what());
        }
        ++index;
    }
    if (o.pass) o.detail = std::to_string(graphs) + " graphs, max deviation " + fmt("%.2g", worst);
    return o;
}

Outcome analytic_fixtures() {
    Outcome o;
    auto expect = [&](const std::string& what, double got, double want) {
        if (!close(got, want, kFixtureTol)) o.fail(what + fmt(": got %.17g want %.17g", got, want));
    };
    expect("path L", avg_shortest_path(oracle::path(3).simple()), 4.0 / 3.0);
    const auto s4 = oracle::star(4).simple();
    expect("star centre closeness", closeness(s4, 0), 1.0);
    expect("star leaf closeness", closeness(s4, 1), 0.6);
    for (std::size_t n = 3; n <= 10; ++n) {
        const auto k = oracle::complete(n).simple();
        const std::string tag = "K" + std::to_string(n);
        expect(tag + " L", avg_shortest_path(k), 1.0);
        const auto pr = pagerank(k);
        for (NodeId v = 0; v < n; ++v) {
            expect(tag + " clustering", clustering(k, v), 1.0);
            expect(tag + " pagerank", pr[v], 1.0 / static_cast<double>(n));
        }
    }
    if (o.pass) o.detail = "path, star S_4, K_3..K_10";
    return o;
}

Outcome threshold_equivalence(const fs::path& corpus) {
    Outcome o;
    const auto manifest = load_manifest(corpus / "manifest.csv");
    std::size_t cells = 0;
    for (const auto& e : manifest.entries) {
        const auto full = preprocess(read_text_file(e.path), e.language, false, StopwordLists::builtin(), e.text_id);
        for (std::size_t size : {200u, 400u}) {
            for (bool filt : {false, true}) {
                Document doc = truncate(full, size);
                if (filt) doc = remove_stopwords(doc, StopwordLists::builtin());
                const auto net = build_cooc(doc);
                const auto table = synthetic_table(net.words, 300, 0);
                const auto cands = candidates(net, table);
                for (double p : {0.0, 25.0, 50.0, 75.0, 100.0}) {
                    const auto g = enrich_global(net, cands, p);
                    const auto l = enrich_local(net, cands, p);
                    ++cells;
                    const std::string where = e.text_id + " size " + std::to_string(size) + " P " + fmt("%g", p);
                    if (g.virtual_edges.size() != l.virtual_edges.size())
                        o.fail(where + ": |V_local| != |V_global|");
                    if (oracle::selected(g) != oracle::global_selection(net, table, p))
                        o.fail(where + ": global selection differs from full sort");
                }
            }
        }
    }
    if (o.pass) o.detail = std::to_string(cells) + " (text, size, stopwords, P) cells";
    return o;
}

Outcome normalization_algebra() {
    Outcome o;
    std::mt19937_64 rng(20240);
    std::uniform_real_distribution<double> mean(0.01, 100.0), spread(0.001, 0.6), scale(1e-4, 1e4);
    std::uniform_int_distribution<int> reps(2, 30);
    for (int i = 0; i < 1000; ++i) {
        const double mu = mean(rng);
        std::normal_distribution<double> noise(mu, mu * spread(rng));
        std::vector<double> b(static_cast<std::size_t>(reps(rng)));
        for (auto& x : b) x = std::fabs(noise(rng)) + 1e-9;
        const double x = std::fabs(noise(rng)) + 1e-9;

        const auto m = normalize(x, b);
        const auto ref = oracle::normalize(x, b);
        auto rel = [](double a, double r) { return std::fabs(a - r) / std::max(1.0, std::fabs(r)); };
        if (rel(m.x_norm, ref.x) > kAlgebraTol || rel(m.eps, ref.eps) > kAlgebraTol || rel(m.d, ref.d) > kAlgebraTol)
            o.fail("instance " + std::to_string(i) + " disagrees with recomputation");

        const double c = scale(rng);
        auto bc = b;
        for (auto& v : bc) v *= c;
        const auto s = normalize(x * c, bc);
        if (rel(s.x_norm, m.x_norm) > kAlgebraTol || rel(s.eps, m.eps) > kAlgebraTol || rel(s.d, m.d) > kAlgebraTol)
            o.fail("instance " + std::to_string(i) + " not scale-invariant");
    }
    if (o.pass) o.detail = "1000 instances";
    return o;
}

Outcome null_calibration(const fs::path& scratch) {
    Outcome o;
    // 50 documents of 400 tokens drawn i.i.d. from a Zipf-like law over 600 words.
    constexpr std::size_t kDocs = 50, kLen = 400, kVocab = 600;
    std::vector<double> weights(kVocab);
    for (std::size_t i = 0; i < kVocab; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
    std::mt19937_64 rng(1234);
    std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());

    PipelineInputs inputs;
    for (std::size_t d = 0; d < kDocs; ++d) {
        std::string raw;
        for (std::size_t t = 0; t < kLen; ++t) {
            std::size_t w = zipf(rng);
            std::string word;
            do {
                word.push_back(static_cast<char>('a' + w % 26));
                w /= 26;
            } while (w);
            raw += "w" + word + " ";
        }
        inputs.texts.push_back({"null" + std::to_string(d), "NULL", "en", raw});
        inputs.analysis.push_back(d);
    }
    RunConfig c;
    c.analysis_manifest = "inline";
    c.sizes = {kLen};
    c.stopword_settings = {false};
    c.strategies = {Strategy::Original};
    c.fractions = {0};
    c.replicas = 10;
    c.seed = 42;
    c.embeddings = "synthetic:0";
    c.out = scratch / "null";
    c.use_cache = false;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    const auto r = run_pipeline(c, inputs);
    std::ostringstream worst;
    double max_i = 0;
    for (const auto& row : r.informativeness) {
        const double i = std::isnan(row.informativeness) ? 0.0 : row.informativeness;
        if (i >= max_i) {
            max_i = i;
            worst.str("");
            worst << to_string(row.key.metric) << "/" << to_string(row.key.summary);
        }
        if (i > kNullMaxInformativeness)
            o.fail(std::string(to_string(row.key.metric)) + "/" + std::string(to_string(row.key.summary)) +
                   fmt(" I = %.1f%% > %.0f%%", i, kNullMaxInformativeness));
    }
    std::printf("      null I per cell:");
    for (const auto& row : r.informativeness)
        std::printf(" %s/%s=%.0f", std::string(to_string(row.key.metric)).c_str(),
                    row.key.summary == SummaryMode::AllNodes ? "all" : "top", row.informativeness);
    std::printf("\n");
    if (o.pass) o.detail = fmt("max I = %.1f%%", max_i) + " (" + worst.str() + ")";
    return o;
}

std::string read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const fs::path& corpus, const fs::path& scratch) {
    Outcome o;
    auto sweep = [&](const std::string& name, std::size_t workers) {
        RunConfig c;
        c.analysis_manifest = corpus / "manifest.csv";
        c.sizes = {200, 400};
        c.stopword_settings = {false, true};
        c.strategies = {Strategy::Global, Strategy::Local};
        c.fractions = {0, 50, 100};
        c.replicas = 10;
        c.seed = 42;
        c.workers = workers;
        c.out = scratch / name;
        fs::remove_all(c.out);
        const auto r = run_pipeline(c);
        report_csv(r.records, r.informativeness, r.variability, c.out);
        std::string all;
        for (const char* f : {"records.csv", "informativeness.csv", "variability.csv"}) all += read_all(c.out / f);
        return std::make_pair(all, r.records.size());
    };
    const auto a = sweep("det-a", 1);
    const auto b = sweep("det-b", 1);
    const auto c = sweep("det-c", 8);
    if (a.first != b.first) o.fail("two cold runs differ");
    if (a.first != c.first) o.fail("workers 1 and 8 differ");
    if (o.pass) o.detail = std::to_string(a.second) + " records; 2 cold runs + 8 workers byte-identical";
    return o;
}

void directional() {
    const char* vectors = std::getenv("CONET_FASTTEXT_VECTORS");
    const char* manifest = std::getenv("CONET_GUTENBERG_MANIFEST");
    if (!vectors || !manifest) {
        std::printf("SKIP  %-28s %7s   set CONET_FASTTEXT_VECTORS and CONET_GUTENBERG_MANIFEST (non-blocking)\n",
                    "directional_corpus_check", "");
        return;
    }
    const auto t0 = Clock::now();
    Outcome o;
    try {
        RunConfig c;
        c.analysis_manifest = manifest;
        c.sizes = {200};
        c.stopword_settings = {true};
        c.strategies = {Strategy::Global};
        c.fractions = {0, 100};
        c.embeddings = vectors;
        c.workers = std::max(1u, std::thread::hardware_concurrency());
        c.use_cache = false;
        c.out = fs::temp_directory_path() / "conet-directional";
        const auto r = run_pipeline(c);
        double i0 = NAN, i100 = NAN;
        for (const auto& row : r.informativeness) {
            if (row.key.metric != Metric::AvgShortestPath || row.key.summary != SummaryMode::AllNodes) continue;
            (row.key.fraction == 0 ? i0 : i100) = row.informativeness;
        }
        o.detail = fmt("I(L) P=0: %.1f%%, P=100: %.1f%%", i0, i100);
        if (!(i100 > i0)) o.fail(o.detail + " (expected increase)");
    } catch (const std::exception& e) {
        o.fail(e.what());
    }
    std::printf("%s  %-28s %7.2fs  %s (non-blocking)\n", o.pass ? "PASS" : "WARN", "directional_corpus_check",
                seconds_since(t0), o.detail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: conet-acceptance <minicorpus-dir> [scratch-dir]\n");
        return 2;
    }
    const fs::path corpus = argv[1];
    const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "conet-acceptance";
    fs::create_directories(scratch);

    bool ok = true;
    auto run = [&](const char* name, double budget, const std::function<Outcome()>& fn) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double s = seconds_since(t0);
        if (s > budget) o.fail(fmt("took %.1fs, budget %.0fs", s, budget));
        ok = report(name, o, s) && ok;
    };

    std::size_t graphs = 0;
    run("disparity_filter", kAlphaBudgetSeconds, disparity);
    run("metric_oracles", kOracleBudgetSeconds, [&] { return metric_oracles(graphs); });
    run("analytic_fixtures", kOracleBudgetSeconds, analytic_fixtures);
    run("threshold_equivalence", kOracleBudgetSeconds, [&] { return threshold_equivalence(corpus); });
    run("normalization_algebra", kOracleBudgetSeconds, normalization_algebra);
    run("null_text_calibration", kNullBudgetSeconds, [&] { return null_calibration(scratch); });
    run("determinism", kDeterminismBudgetSeconds, [&] { return determinism(corpus, scratch); });
    directional();

    std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
    return ok ? 0 : 1;
}
