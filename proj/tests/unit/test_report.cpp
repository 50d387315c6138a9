#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "conet/cache.hpp"
#include "conet/config.hpp"
#include "conet/csv.hpp"
#include "conet/error.hpp"
#include "conet/report.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace conet;

namespace {

CellKey key(std::size_t size, bool filt, Strategy s, double p, Metric m, SummaryMode sm) {
    return {size, filt, s, p, m, sm};
}

}  // namespace

TEST_CASE("csv split and escape") {
    CHECK(csv::split("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(csv::split("\"x,y\",\"say \"\"hi\"\"\"") == std::vector<std::string>{"x,y", "say \"hi\""});
    CHECK_THROWS_AS(csv::split("\"open"), FormatError);
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("q\"q") == "\"q\"\"q\"");
    const std::vector<std::string> fields{"a,b", "c", "", "d\"e"};
    CHECK(csv::split(csv::join(fields)) == fields);
}

TEST_CASE("format_real") {
    CHECK(format_real(1.0 / 3.0) == "0.333333");
    CHECK(format_real(42.0) == "42");
    CHECK(format_real(1e-20) == "1e-20");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("empty reports are headers only") {
    testutil::TempDir dir;
    report_csv({}, {}, {}, dir / "out");
    CHECK(testutil::read_file(dir / "out/records.csv") == std::string(kRecordsHeader) + "\n");
    CHECK(testutil::read_file(dir / "out/informativeness.csv") == std::string(kInformativenessHeader) + "\n");
    CHECK(testutil::read_file(dir / "out/variability.csv") == std::string(kVariabilityHeader) + "\n");
}

TEST_CASE("rows are sorted by key and round trip byte-identically") {
    std::vector<RecordRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const std::string id : {"zeta", "alpha"})
        for (auto s : {Strategy::Local, Strategy::Global})
            for (double p : {100.0, 50.0, 0.0}) {
                RecordRow r;
                r.text_id = id;
                r.dataset_tag = "NEN";
                r.language = "en";
                r.key = key(200, true, s, p, Metric::Closeness, SummaryMode::TopWords);
                r.x_raw = 0.123456789;
                r.mu_r = 1.0 / 7.0;
                r.sigma_r = 0.0;
                r.x_norm = p;
                r.eps = nan;
                r.d = std::numeric_limits<double>::infinity();
                if (p > 0) r.informative = p > 50;
                r.flags = p == 0 ? "" : "short_document;candidate_shortfall";
                rows.push_back(r);
            }
    const auto text = records_csv(rows);
    const auto parsed = parse_records_csv(text);
    REQUIRE(parsed.size() == rows.size());
    CHECK(parsed.front().text_id == "alpha");
    CHECK(parsed.front().key.strategy == Strategy::Global);
    CHECK(parsed.front().key.fraction == 0.0);
    CHECK(!parsed.front().informative.has_value());
    CHECK(std::isnan(parsed.front().eps));
    CHECK(records_csv(parsed) == text);

    std::vector<InformativenessRow> info;
    for (auto m : kAllMetrics) info.push_back({key(400, false, Strategy::Original, 0, m, SummaryMode::AllNodes), 42.0, 10, 4, 1});
    const auto itext = informativeness_csv(info);
    const auto iparsed = parse_informativeness_csv(itext);
    CHECK(informativeness_csv(iparsed) == itext);
    std::set<std::string> keys;
    for (const auto& r : iparsed)
        keys.insert(std::string(to_string(r.key.metric)) + std::string(to_string(r.key.summary)));
    CHECK(keys.size() == iparsed.size());

    std::vector<VariabilityRow> var{{key(200, true, Strategy::Local, 25, Metric::PageRank, SummaryMode::TopWords), 0.2, 0.1, 2.0, true},
                                    {key(200, true, Strategy::Local, 25, Metric::Eigenvector, SummaryMode::TopWords), nan, 0.1, nan, std::nullopt}};
    const auto vtext = variability_csv(var);
    CHECK(variability_csv(parse_variability_csv(vtext)) == vtext);
}

TEST_CASE("key ordering: numbers by value, strings bytewise") {
    const auto a = key(200, false, Strategy::Global, 100, Metric::AvgShortestPath, SummaryMode::AllNodes);
    const auto b = key(1000, false, Strategy::Global, 100, Metric::AvgShortestPath, SummaryMode::AllNodes);
    CHECK(key_less(a, b));
    const auto c = key(200, false, Strategy::Global, 25, Metric::AvgShortestPath, SummaryMode::AllNodes);
    CHECK(key_less(c, a));
    const auto keep = key(200, false, Strategy::Global, 25, Metric::Betweenness, SummaryMode::AllNodes);
    const auto filt = key(200, true, Strategy::Global, 25, Metric::Betweenness, SummaryMode::AllNodes);
    CHECK(key_less(filt, keep));  // "filter" < "keep"
}

TEST_CASE("parsers reject schema violations with line numbers") {
    CHECK_THROWS_AS(parse_records_csv("text_id,nope\n"), FormatError);
    const std::string bad = std::string(kInformativenessHeader) + "\n200,keep,global,0,closeness,all_nodes,1,1,1,0\n200,keep,global\n";
    try {
        parse_informativeness_csv(bad);
        FAIL("expected an error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 3);
    }
    const std::string bad_metric = std::string(kInformativenessHeader) + "\n200,keep,global,0,radius,all_nodes,1,1,1,0\n";
    CHECK_THROWS_AS(parse_informativeness_csv(bad_metric), FormatError);
}

TEST_CASE("config file: keys, comments, relative paths, errors") {
    testutil::TempDir dir;
    testutil::write_file(dir / "run.cfg",
                         "# sweep\n"
                         "analysis = corpus/m.csv\n"
                         "semantics = corpus/m.csv  # same set\n"
                         "sizes = 200, 400\n"
                         "stopwords = filter\n"
                         "strategies = Original, local\n"
                         "fractions = 0,50\n"
                         "replicas = 4\n"
                         "seed = 7\n"
                         "embeddings = vectors.vec\n"
                         "workers = 3\n"
                         "std = sample\n"
                         "stopword_order = filter_first\n"
                         "cache = false\n");
    const auto c = load_config(dir / "run.cfg");
    CHECK(c.analysis_manifest == dir / "corpus/m.csv");
    CHECK(c.semantics_manifest == dir / "corpus/m.csv");
    CHECK(!c.syntax_manifest);
    CHECK(c.sizes == std::vector<std::size_t>{200, 400});
    CHECK(c.stopword_settings == std::vector<bool>{true});
    CHECK(c.strategies == std::vector<Strategy>{Strategy::Original, Strategy::Local});
    CHECK(c.fractions == std::vector<double>{0, 50});
    CHECK(c.replicas == 4);
    CHECK(c.seed == 7);
    CHECK(c.embeddings == (dir / "vectors.vec").string());
    CHECK(!c.synthetic_seed());
    CHECK(c.workers == 3);
    CHECK(!c.population_std);
    CHECK(c.stopword_order == StopwordOrder::FilterFirst);
    CHECK(!c.use_cache);

    testutil::write_file(dir / "bad.cfg", "analysis = m.csv\nsizes = 200\ncolour = blue\n");
    try {
        load_config(dir / "bad.cfg");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    testutil::write_file(dir / "bad2.cfg", "analysis = m.csv\nfractions = 150\n");
    CHECK_THROWS_AS(load_config(dir / "bad2.cfg").validate(), ConfigError);
    testutil::write_file(dir / "bad3.cfg", "sizes = 200\n");
    CHECK_THROWS_AS(load_config(dir / "bad3.cfg").validate(), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);

    RunConfig d;
    d.analysis_manifest = "m.csv";
    CHECK(d.synthetic_seed() == 0);
    CHECK(d.effective_cache_dir() == std::filesystem::path("conet-out") / "cache");
    d.replicas = 1;
    CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("metric cache: serialization is exact, keys track content") {
    const auto g = oracle::star(6).simple();
    const std::vector<NodeId> top{0, 2};
    const auto mv = compute_metrics(g, top);
    const auto back = deserialize_metric_vector(serialize_metric_vector(mv));
    REQUIRE(back);
    for (std::size_t i = 0; i < mv.values.size(); ++i) {
        CHECK(back->values[i].undefined_reason == mv.values[i].undefined_reason);
        if (mv.values[i].defined()) CHECK(back->values[i].value == mv.values[i].value);
    }
    CHECK(back->component_coverage == mv.component_coverage);
    CHECK(!deserialize_metric_vector("garbage"));

    const auto k1 = metric_cache_key(g, top, {});
    CHECK(k1.size() == 64);
    CHECK(k1 == metric_cache_key(oracle::star(6).simple(), top, {}));
    CHECK(k1 != metric_cache_key(oracle::star(7).simple(), top, {}));
    const std::vector<NodeId> other_top{0, 3};
    CHECK(k1 != metric_cache_key(g, other_top, {}));
    MetricOptions damp;
    damp.damping = 0.9;
    CHECK(k1 != metric_cache_key(g, top, damp));

    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    testutil::TempDir dir;
    const MetricCache cache(dir / "c");
    CHECK(!cache.get(k1));
    cache.put(k1, mv);
    const auto hit = cache.get(k1);
    REQUIRE(hit);
    CHECK(serialize_metric_vector(*hit) == serialize_metric_vector(mv));
}
