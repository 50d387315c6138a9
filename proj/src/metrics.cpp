#include "conet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "conet/error.hpp"

namespace conet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PathStats {
    std::vector<NodeId> component;
    std::vector<double> distance_sum;  // NaN outside the component
    std::vector<double> betweenness;   // raw ordered-pair dependency sums
};

// One BFS per component node; accumulates distances and, optionally,
// Brandes dependencies. Sources are processed in ascending id order.
PathStats path_stats(const SimpleGraph& g, bool with_betweenness) {
    const std::size_t n = g.node_count();
    PathStats st;
    st.component = largest_component(g);
    st.distance_sum.assign(n, kNaN);
    if (with_betweenness) st.betweenness.assign(n, kNaN);
    for (NodeId v : st.component) {
        st.distance_sum[v] = 0.0;
        if (with_betweenness) st.betweenness[v] = 0.0;
    }

    std::vector<std::int64_t> dist(n, -1);
    std::vector<double> sigma(n, 0.0), delta(n, 0.0);
    std::vector<NodeId> order;
    order.reserve(n);

    for (NodeId s : st.component) {
        for (NodeId v : order) {
            dist[v] = -1;
            sigma[v] = 0.0;
            delta[v] = 0.0;
        }
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        std::uint64_t total = 0;
        for (std::size_t head = 0; head < order.size(); ++head) {
            const NodeId v = order[head];
            total += static_cast<std::uint64_t>(dist[v]);
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        st.distance_sum[s] = static_cast<double>(total);
        if (!with_betweenness) continue;
        for (std::size_t i = order.size(); i-- > 1;) {
            const NodeId w = order[i];
            for (NodeId v : g.neighbors(w)) {
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            st.betweenness[w] += delta[w];
        }
    }
    return st;
}

}  // namespace

SimpleGraph::SimpleGraph(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.a == e.b) continue;
        if (e.a >= node_count || e.b >= node_count)
            throw PreconditionError("edge endpoint out of range");
        arcs.emplace_back(e.a, e.b);
        arcs.emplace_back(e.b, e.a);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    offsets_.assign(node_count + 1, 0);
    for (const auto& [u, v] : arcs) ++offsets_[u + 1];
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.reserve(arcs.size());
    for (const auto& [u, v] : arcs) adjacency_.push_back(v);
}

bool SimpleGraph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

SimpleGraph to_graph(const CoocNetwork& net) {
    std::vector<Edge> edges = net.cooc_edges;
    for (const auto& v : net.virtual_edges) edges.push_back({v.a, v.b});
    return SimpleGraph(net.node_count(), edges);
}

std::vector<NodeId> largest_component(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<bool> seen(n, false);
    std::vector<NodeId> best, current;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        current.clear();
        current.push_back(start);
        seen[start] = true;
        for (std::size_t head = 0; head < current.size(); ++head) {
            for (NodeId w : g.neighbors(current[head])) {
                if (!seen[w]) {
                    seen[w] = true;
                    current.push_back(w);
                }
            }
        }
        if (current.size() > best.size()) best = current;
    }
    std::sort(best.begin(), best.end());
    return best;
}

std::vector<double> node_mean_distance(const SimpleGraph& g) {
    auto st = path_stats(g, false);
    const auto nc = st.component.size();
    if (nc < 2) throw PreconditionError("largest component has fewer than 2 nodes");
    for (auto& d : st.distance_sum) d /= static_cast<double>(nc - 1);
    return st.distance_sum;
}

double avg_shortest_path(const SimpleGraph& g) {
    const auto st = path_stats(g, false);
    const auto nc = st.component.size();
    if (nc < 2) throw PreconditionError("largest component has fewer than 2 nodes");
    double total = 0.0;
    for (NodeId v : st.component) total += st.distance_sum[v];
    // Each unordered pair appears twice in the per-source sums.
    return total / (static_cast<double>(nc) * static_cast<double>(nc - 1));
}

std::vector<double> closeness_all(const SimpleGraph& g) {
    auto st = path_stats(g, false);
    const auto nc = st.component.size();
    if (nc < 2) throw PreconditionError("largest component has fewer than 2 nodes");
    for (auto& d : st.distance_sum) d = static_cast<double>(nc - 1) / d;  // NaN stays NaN
    return st.distance_sum;
}

double closeness(const SimpleGraph& g, NodeId v) {
    if (v >= g.node_count()) throw PreconditionError("node out of range");
    return closeness_all(g)[v];
}

double clustering(const SimpleGraph& g, NodeId v) {
    const auto nb = g.neighbors(v);
    const std::size_t k = nb.size();
    if (k < 2) return 0.0;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto inner = g.neighbors(nb[i]);
        // Count neighbours of nb[i] that are also neighbours of v and come after it.
        auto a = std::upper_bound(inner.begin(), inner.end(), nb[i]);
        auto b = nb.begin() + static_cast<std::ptrdiff_t>(i) + 1;
        while (a != inner.end() && b != nb.end()) {
            if (*a < *b) ++a;
            else if (*b < *a) ++b;
            else {
                ++links;
                ++a;
                ++b;
            }
        }
    }
    return static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

std::vector<double> clustering_all(const SimpleGraph& g) {
    std::vector<double> out(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) out[v] = clustering(g, v);
    return out;
}

std::vector<double> betweenness_all(const SimpleGraph& g) {
    auto st = path_stats(g, true);
    const double nc = static_cast<double>(st.component.size());
    const double pairs = (nc - 1.0) * (nc - 2.0) / 2.0;
    for (NodeId v : st.component) {
        // Ordered-pair sums count each unordered pair twice.
        st.betweenness[v] = pairs > 0.0 ? st.betweenness[v] / 2.0 / pairs : 0.0;
    }
    return st.betweenness;
}

double betweenness(const SimpleGraph& g, NodeId v) {
    if (v >= g.node_count()) throw PreconditionError("node out of range");
    return betweenness_all(g)[v];
}

std::vector<double> pagerank(const SimpleGraph& g, double damping, IterationOptions opts) {
    const std::size_t n = g.node_count();
    if (n == 0) throw PreconditionError("pagerank of an empty graph");
    if (!(damping > 0.0 && damping < 1.0)) throw PreconditionError("damping must lie in (0, 1)");

    const double nd = static_cast<double>(n);
    std::vector<double> x(n, 1.0 / nd), next(n), share(n);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            const auto k = g.degree(v);
            if (k == 0) {
                dangling += x[v];
                share[v] = 0.0;
            } else {
                share[v] = x[v] / static_cast<double>(k);
            }
        }
        const double base = (1.0 - damping) / nd + damping * dangling / nd;
        residual = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            double in = 0.0;
            for (NodeId u : g.neighbors(v)) in += share[u];
            next[v] = base + damping * in;
            residual += std::abs(next[v] - x[v]);
        }
        x.swap(next);
        if (residual < opts.tolerance) {
            const double total = std::accumulate(x.begin(), x.end(), 0.0);
            for (auto& v : x) v /= total;
            return x;
        }
    }
    throw ConvergenceError("pagerank did not converge", residual);
}

std::vector<double> eigenvector(const SimpleGraph& g, IterationOptions opts, double shift) {
    if (g.edge_count() == 0) throw PreconditionError("eigenvector centrality needs an edge");
    const std::size_t n = g.node_count();
    const auto comp = largest_component(g);
    std::vector<bool> inside(n, false);
    for (NodeId v : comp) inside[v] = true;

    std::vector<double> x(n, 0.0), next(n, 0.0);
    const double init = 1.0 / std::sqrt(static_cast<double>(comp.size()));
    for (NodeId v : comp) x[v] = init;

    double residual = 0.0;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        double sq = 0.0;
        for (NodeId v : comp) {
            double s = shift * x[v];
            for (NodeId u : g.neighbors(v)) s += x[u];
            next[v] = s;
            sq += s * s;
        }
        const double norm = std::sqrt(sq);
        residual = 0.0;
        for (NodeId v : comp) {
            next[v] /= norm;
            const double d = next[v] - x[v];
            residual += d * d;
        }
        residual = std::sqrt(residual);
        x.swap(next);
        if (residual < opts.tolerance) return x;
    }
    throw ConvergenceError("eigenvector centrality did not converge", residual);
}

TopWords top_words(const CoocNetwork& net, std::size_t count) {
    std::vector<NodeId> ids(net.node_count());
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](NodeId l, NodeId r) {
        if (net.frequencies[l] != net.frequencies[r]) return net.frequencies[l] > net.frequencies[r];
        if (l != r) return l < r;  // node ids follow first occurrence
        return net.words[l] < net.words[r];
    });
    TopWords top;
    for (std::size_t i = 0; i < std::min(count, ids.size()); ++i) top.words.push_back(net.words[ids[i]]);
    return top;
}

std::vector<NodeId> top_word_nodes(const CoocNetwork& net, const TopWords& top) {
    std::unordered_map<std::string_view, NodeId> index;
    for (NodeId i = 0; i < net.node_count(); ++i) index.emplace(net.words[i], i);
    std::vector<NodeId> out;
    for (const auto& w : top.words)
        if (auto it = index.find(w); it != index.end()) out.push_back(it->second);
    return out;
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::AvgShortestPath: return "avg_shortest_path";
        case Metric::Closeness: return "closeness";
        case Metric::Clustering: return "clustering";
        case Metric::Betweenness: return "betweenness";
        case Metric::PageRank: return "pagerank";
        case Metric::Eigenvector: return "eigenvector";
    }
    return "unknown";
}

std::string_view to_string(SummaryMode s) {
    return s == SummaryMode::AllNodes ? "all_nodes" : "top_words";
}

Metric parse_metric(std::string_view s) {
    for (Metric m : kAllMetrics)
        if (to_string(m) == s) return m;
    throw FormatError("unknown metric \"" + std::string(s) + "\"");
}

SummaryMode parse_summary(std::string_view s) {
    for (SummaryMode m : kAllSummaries)
        if (to_string(m) == s) return m;
    throw FormatError("unknown summary \"" + std::string(s) + "\"");
}

Summary summarize(std::span<const double> per_node, SummaryMode mode, std::span<const NodeId> top) {
    Summary out;
    double total = 0.0;
    auto take = [&](double v) {
        if (std::isnan(v)) {
            ++out.skipped;
        } else {
            total += v;
            ++out.used;
        }
    };
    if (mode == SummaryMode::AllNodes) {
        for (double v : per_node) take(v);
    } else {
        for (NodeId id : top) {
            if (id >= per_node.size()) throw PreconditionError("top-word node out of range");
            take(per_node[id]);
        }
    }
    if (out.used == 0) throw PreconditionError("no defined values to summarize");
    out.value = total / static_cast<double>(out.used);
    return out;
}

MetricVector compute_metrics(const SimpleGraph& g, std::span<const NodeId> top_nodes,
                             const MetricOptions& opts) {
    MetricVector mv;
    const std::size_t n = g.node_count();

    auto fill = [&](Metric m, auto&& per_node_fn) {
        std::vector<double> per_node;
        std::string reason;
        try {
            per_node = per_node_fn();
        } catch (const ConvergenceError&) {
            reason = "not_converged";
        } catch (const PreconditionError&) {
            reason = "degenerate_graph";
        }
        for (SummaryMode s : kAllSummaries) {
            auto& slot = mv.at(m, s);
            if (!reason.empty()) {
                slot = {kNaN, reason};
                continue;
            }
            try {
                slot = {summarize(per_node, s, top_nodes).value, {}};
            } catch (const PreconditionError&) {
                slot = {kNaN, "no_defined_values"};
            }
        }
    };

    PathStats paths;
    bool paths_ok = false;
    try {
        paths = path_stats(g, true);
        paths_ok = paths.component.size() >= 2;
    } catch (const PreconditionError&) {
    }
    mv.component_coverage =
        n ? static_cast<double>(largest_component(g).size()) / static_cast<double>(n) : 0.0;

    auto require_paths = [&] {
        if (!paths_ok) throw PreconditionError("largest component has fewer than 2 nodes");
    };
    const double nc = static_cast<double>(paths.component.size());

    fill(Metric::AvgShortestPath, [&] {
        require_paths();
        auto v = paths.distance_sum;
        for (auto& d : v) d /= nc - 1.0;
        return v;
    });
    fill(Metric::Closeness, [&] {
        require_paths();
        auto v = paths.distance_sum;
        for (auto& d : v) d = (nc - 1.0) / d;
        return v;
    });
    fill(Metric::Clustering, [&] { return clustering_all(g); });
    fill(Metric::Betweenness, [&] {
        require_paths();
        auto v = paths.betweenness;
        const double pairs = (nc - 1.0) * (nc - 2.0) / 2.0;
        for (NodeId u : paths.component) v[u] = pairs > 0.0 ? v[u] / 2.0 / pairs : 0.0;
        return v;
    });
    fill(Metric::PageRank, [&] { return pagerank(g, opts.damping, opts.iteration); });
    fill(Metric::Eigenvector, [&] { return eigenvector(g, opts.iteration); });
    return mv;
}

}  // namespace conet
