#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conet/network.hpp"

namespace conet {

// Unweighted simple graph in compressed adjacency form. Self-loops and
// duplicate edges passed to the constructor are dropped.
class SimpleGraph {
public:
    SimpleGraph() = default;
    SimpleGraph(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;  // sorted within each node
};

// Co-occurrence plus virtual edges, weights discarded.
SimpleGraph to_graph(const CoocNetwork& net);

// Nodes of the largest connected component, ascending. Ties between equally
// large components go to the one holding the smallest node id.
std::vector<NodeId> largest_component(const SimpleGraph& g);

// Per-node results use NaN for "undefined at this node" (outside the largest
// component for the path-based metrics).

// Mean distance over unordered pairs of the largest component. Throws
// PreconditionError when that component has fewer than two nodes.
double avg_shortest_path(const SimpleGraph& g);
// Per node: mean distance to the other nodes of the largest component. Its
// all-node mean equals avg_shortest_path.
std::vector<double> node_mean_distance(const SimpleGraph& g);

double closeness(const SimpleGraph& g, NodeId v);
std::vector<double> closeness_all(const SimpleGraph& g);

// Triangles through v over C(deg, 2); 0 when deg < 2.
double clustering(const SimpleGraph& g, NodeId v);
std::vector<double> clustering_all(const SimpleGraph& g);

// Brandes accumulation restricted to the largest component, normalised by
// (n_c - 1)(n_c - 2) / 2 unordered pairs; 0 when n_c < 3.
std::vector<double> betweenness_all(const SimpleGraph& g);
double betweenness(const SimpleGraph& g, NodeId v);

struct IterationOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 1000;
};

// Power iteration over both directions of every edge; dangling mass is spread
// uniformly. Throws ConvergenceError at the iteration cap.
std::vector<double> pagerank(const SimpleGraph& g, double damping = 0.85,
                             IterationOptions opts = {});

// Dominant adjacency eigenvector of the largest component (unit L2 norm,
// nonnegative), zero elsewhere. Iterates on A + shift*I; a uniform diagonal
// shift leaves the eigenvectors unchanged and breaks the +/- lambda tie on
// bipartite components.
std::vector<double> eigenvector(const SimpleGraph& g, IterationOptions opts = {},
                                double shift = 1.0);

struct TopWords {
    std::vector<std::string> words;
};

// Highest-frequency words; ties by earlier first occurrence, then bytewise.
TopWords top_words(const CoocNetwork& net, std::size_t count = 10);

enum class Metric { AvgShortestPath, Closeness, Clustering, Betweenness, PageRank, Eigenvector };
enum class SummaryMode { AllNodes, TopWords };

inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::AvgShortestPath, Metric::Closeness, Metric::Clustering,
    Metric::Betweenness,     Metric::PageRank,  Metric::Eigenvector};
inline constexpr std::array<SummaryMode, 2> kAllSummaries = {SummaryMode::AllNodes,
                                                             SummaryMode::TopWords};

std::string_view to_string(Metric m);
std::string_view to_string(SummaryMode s);
Metric parse_metric(std::string_view s);
SummaryMode parse_summary(std::string_view s);

struct Summary {
    double value = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;  // selected nodes with an undefined value
};

// Arithmetic mean of the defined values over all nodes, or over `top` (node
// ids) in TopWords mode. Throws PreconditionError when nothing is defined.
Summary summarize(std::span<const double> per_node, SummaryMode mode,
                  std::span<const NodeId> top = {});

// Node ids of the words in `top` that exist in `net`, in rank order.
std::vector<NodeId> top_word_nodes(const CoocNetwork& net, const TopWords& top);

struct MetricValue {
    double value = 0.0;           // NaN when undefined
    std::string undefined_reason;  // empty when defined

    bool defined() const noexcept { return undefined_reason.empty(); }
};

struct MetricVector {
    std::array<MetricValue, 12> values{};
    double component_coverage = 0.0;  // largest component size / node count

    static constexpr std::size_t slot(Metric m, SummaryMode s) {
        return static_cast<std::size_t>(m) * 2 + static_cast<std::size_t>(s);
    }
    const MetricValue& at(Metric m, SummaryMode s) const { return values[slot(m, s)]; }
    MetricValue& at(Metric m, SummaryMode s) { return values[slot(m, s)]; }
};

struct MetricOptions {
    double damping = 0.85;
    IterationOptions iteration{};
};

// All six metrics under both summaries. Failures of one metric are recorded
// as undefined values and never abort the others.
MetricVector compute_metrics(const SimpleGraph& g, std::span<const NodeId> top_nodes,
                             const MetricOptions& opts = {});

}  // namespace conet
