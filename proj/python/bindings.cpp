#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>

#include "conet/config.hpp"
#include "conet/corpus.hpp"
#include "conet/embeddings.hpp"
#include "conet/error.hpp"
#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/pipeline.hpp"
#include "conet/report.hpp"
#include "conet/stats.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

std::optional<double> nan_to_none(double v) {
    if (std::isnan(v)) return std::nullopt;
    return v;
}

std::vector<std::optional<double>> per_node(const std::vector<double>& values) {
    std::vector<std::optional<double>> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(nan_to_none(v));
    return out;
}

py::dict metric_dict(const conet::MetricVector& mv) {
    py::dict out;
    for (auto m : conet::kAllMetrics) {
        for (auto s : conet::kAllSummaries) {
            const auto& v = mv.at(m, s);
            out[py::make_tuple(std::string(conet::to_string(m)), std::string(conet::to_string(s)))] =
                v.defined() ? py::cast(v.value) : py::none();
        }
    }
    return out;
}

py::dict run_from_config(const std::string& config_path, const py::dict& overrides) {
    auto config = conet::load_config(config_path);
    for (auto item : overrides) {
        conet::apply_setting(config, py::str(item.first).cast<std::string>(),
                             py::str(item.second).cast<std::string>());
    }
    conet::PipelineResult result;
    {
        py::gil_scoped_release release;
        result = conet::run_pipeline(config);
        conet::report_csv(result.records, result.informativeness, result.variability, config.out);
    }
    py::dict out;
    out["out"] = config.out.string();
    out["records"] = result.records.size();
    out["failures"] = result.failures;
    out["cache_hits"] = result.cache_hits;
    out["cache_misses"] = result.cache_misses;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Enriched word co-occurrence networks: construction, metrics and shuffle statistics";

    auto base = py::register_exception<conet::Error>(m, "ConetError", PyExc_ValueError);
    py::register_exception<conet::FormatError>(m, "FormatError", base.ptr());
    py::register_exception<conet::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<conet::PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<conet::ConvergenceError>(m, "ConvergenceError", base.ptr());

    // corpus
    py::class_<conet::Document>(m, "Document")
        .def(py::init<>())
        .def_readwrite("text_id", &conet::Document::text_id)
        .def_readwrite("language", &conet::Document::language)
        .def_readwrite("tokens", &conet::Document::tokens)
        .def_readonly("stopwords_filtered", &conet::Document::stopwords_filtered)
        .def_readonly("short_document", &conet::Document::short_document)
        .def_property_readonly("size", &conet::Document::size)
        .def("__len__", &conet::Document::size)
        .def("__repr__", [](const conet::Document& d) {
            return "<Document " + d.text_id + " (" + std::to_string(d.size()) + " tokens)>";
        });

    m.def("tokenize", &conet::tokenize, py::arg("text"));
    m.def(
        "preprocess",
        [](const std::string& raw, const std::string& language, bool filter_stopwords,
           const std::string& text_id) {
            return conet::preprocess(raw, language, filter_stopwords, conet::StopwordLists::builtin(),
                                     text_id);
        },
        py::arg("raw"), py::arg("language"), py::arg("filter_stopwords") = false,
        py::arg("text_id") = "");
    m.def("truncate", &conet::truncate, py::arg("doc"), py::arg("n"));
    m.def(
        "make_shuffles",
        [](const conet::Document& doc, std::size_t count, std::uint64_t seed) {
            return conet::make_shuffles(doc, count, seed).replicas;
        },
        py::arg("doc"), py::arg("count") = 10, py::arg("seed") = 42,
        "Shuffled replicas of `doc` (list of Documents).");

    // embeddings
    py::class_<conet::EmbeddingTable>(m, "EmbeddingTable")
        .def_property_readonly("dim", &conet::EmbeddingTable::dim)
        .def_property_readonly("source_id", &conet::EmbeddingTable::source_id)
        .def_property_readonly("words", &conet::EmbeddingTable::words)
        .def("__len__", &conet::EmbeddingTable::size)
        .def("__contains__", &conet::EmbeddingTable::contains)
        .def("vector", [](const conet::EmbeddingTable& t, const std::string& w) -> std::optional<std::vector<double>> {
            auto v = t.vector(w);
            if (!v) return std::nullopt;
            return std::vector<double>(v->begin(), v->end());
        });
    m.def(
        "load_vectors",
        [](const std::filesystem::path& path, std::optional<std::unordered_set<std::string>> restrict_to) {
            return conet::load_vectors(path, restrict_to ? &*restrict_to : nullptr);
        },
        py::arg("path"), py::arg("restrict_to") = py::none());
    m.def("write_vectors", &conet::write_vectors, py::arg("table"), py::arg("path"));
    m.def("cosine", &conet::cosine, py::arg("table"), py::arg("a"), py::arg("b"));
    m.def("synthetic_table", &conet::synthetic_table, py::arg("vocabulary"), py::arg("dim"),
          py::arg("seed"));

    // network
    py::enum_<conet::Strategy>(m, "Strategy")
        .value("ORIGINAL", conet::Strategy::Original)
        .value("GLOBAL", conet::Strategy::Global)
        .value("LOCAL", conet::Strategy::Local);

    py::class_<conet::EdgeCandidate>(m, "EdgeCandidate")
        .def_property_readonly("pair", [](const conet::EdgeCandidate& c) { return py::make_tuple(c.pair.a, c.pair.b); })
        .def_readonly("weight", &conet::EdgeCandidate::weight);

    py::class_<conet::CoocNetwork>(m, "CoocNetwork")
        .def_readonly("words", &conet::CoocNetwork::words)
        .def_readonly("frequencies", &conet::CoocNetwork::frequencies)
        .def_property_readonly("cooc_edges", [](const conet::CoocNetwork& n) {
            std::vector<std::pair<conet::NodeId, conet::NodeId>> out;
            for (const auto& e : n.cooc_edges) out.emplace_back(e.a, e.b);
            return out;
        })
        .def_property_readonly("virtual_edges", [](const conet::CoocNetwork& n) {
            std::vector<std::tuple<conet::NodeId, conet::NodeId, double>> out;
            for (const auto& e : n.virtual_edges) out.emplace_back(e.a, e.b, e.weight);
            return out;
        })
        .def_property_readonly("node_count", &conet::CoocNetwork::node_count)
        .def_property_readonly("cooc_edge_count", &conet::CoocNetwork::cooc_edge_count)
        .def_property_readonly("shortfall", [](const conet::CoocNetwork& n) { return n.enrichment.shortfall(); })
        .def("dump", &conet::dump_string);

    m.def("build_cooc", &conet::build_cooc, py::arg("doc"));
    m.def("candidates", py::overload_cast<const conet::CoocNetwork&, const conet::EmbeddingTable&>(&conet::candidates),
          py::arg("net"), py::arg("table"));
    m.def("virtual_edge_budget", &conet::virtual_edge_budget, py::arg("cooc_edges"), py::arg("fraction"));
    m.def("enrich_global", &conet::enrich_global, py::arg("net"), py::arg("candidates"), py::arg("fraction"));
    m.def("enrich_local", &conet::enrich_local, py::arg("net"), py::arg("candidates"), py::arg("fraction"));
    m.def("disparity_alpha", &conet::disparity_alpha, py::arg("weight"), py::arg("strength"),
          py::arg("degree"));

    // metrics, on the unweighted union of co-occurrence and virtual edges
    m.def("avg_shortest_path", [](const conet::CoocNetwork& n) { return conet::avg_shortest_path(conet::to_graph(n)); });
    m.def("closeness", [](const conet::CoocNetwork& n) { return per_node(conet::closeness_all(conet::to_graph(n))); });
    m.def("clustering", [](const conet::CoocNetwork& n) { return per_node(conet::clustering_all(conet::to_graph(n))); });
    m.def("betweenness", [](const conet::CoocNetwork& n) { return per_node(conet::betweenness_all(conet::to_graph(n))); });
    m.def(
        "pagerank",
        [](const conet::CoocNetwork& n, double damping) { return conet::pagerank(conet::to_graph(n), damping); },
        py::arg("net"), py::arg("damping") = 0.85);
    m.def("eigenvector", [](const conet::CoocNetwork& n) { return conet::eigenvector(conet::to_graph(n)); });
    m.def(
        "top_words", [](const conet::CoocNetwork& n, std::size_t count) { return conet::top_words(n, count).words; },
        py::arg("net"), py::arg("count") = 10);
    m.def(
        "compute_metrics",
        [](const conet::CoocNetwork& n, std::optional<std::vector<std::string>> top) {
            conet::TopWords tw{top ? *top : conet::top_words(n).words};
            return metric_dict(conet::compute_metrics(conet::to_graph(n), conet::top_word_nodes(n, tw)));
        },
        py::arg("net"), py::arg("top_words") = py::none(),
        "All 12 metric summaries keyed by (metric, summary); undefined values are None.");

    // stats
    py::class_<conet::NormalizedMetric>(m, "NormalizedMetric")
        .def_readonly("x_raw", &conet::NormalizedMetric::x_raw)
        .def_readonly("baseline_mean", &conet::NormalizedMetric::baseline_mean)
        .def_readonly("baseline_std", &conet::NormalizedMetric::baseline_std)
        .def_readonly("x_norm", &conet::NormalizedMetric::x_norm)
        .def_readonly("eps", &conet::NormalizedMetric::eps)
        .def_readonly("d", &conet::NormalizedMetric::d)
        .def_readonly("d_signed", &conet::NormalizedMetric::d_signed)
        .def_readonly("informative", &conet::NormalizedMetric::informative)
        .def_readonly("undefined_reason", &conet::NormalizedMetric::undefined_reason)
        .def_property_readonly("defined", &conet::NormalizedMetric::defined);
    m.def(
        "normalize",
        [](double x_raw, const std::vector<double>& baseline, bool signed_distance, bool population_std) {
            return conet::normalize(x_raw, baseline, {population_std, signed_distance});
        },
        py::arg("x_raw"), py::arg("baseline"), py::arg("signed_distance") = false,
        py::arg("population_std") = true);
    m.def(
        "informativeness",
        [](const std::vector<conet::NormalizedMetric>& cells) { return conet::informativeness(cells).informativeness; },
        py::arg("cells"), "Percentage of defined cells with D > 1.");
    m.def("coefficient_of_variation",
          [](const std::vector<double>& v) { return conet::coefficient_of_variation(v); }, py::arg("values"));
    m.def(
        "variability_ratio",
        [](const std::vector<double>& syntax, const std::vector<double>& semantics) {
            return conet::variability_ratio(syntax, semantics).ratio;
        },
        py::arg("syntax_values"), py::arg("semantics_values"));

    // pipeline
    m.def("run_pipeline", &run_from_config, py::arg("config"), py::arg("overrides") = py::dict(),
          "Run the sweep in a config file (keys as in the file; values as strings) and write the CSV reports.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
