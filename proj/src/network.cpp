#include "conet/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "conet/error.hpp"

namespace conet {

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Original: return "original";
        case Strategy::Global: return "global";
        case Strategy::Local: return "local";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "original") return Strategy::Original;
    if (lower == "global") return Strategy::Global;
    if (lower == "local") return Strategy::Local;
    throw ConfigError("unknown strategy \"" + std::string(s) + "\"");
}

std::optional<NodeId> CoocNetwork::find(const std::string& word) const {
    auto it = std::find(words.begin(), words.end(), word);
    if (it == words.end()) return std::nullopt;
    return static_cast<NodeId>(it - words.begin());
}

CoocNetwork build_cooc(const Document& doc) {
    if (doc.size() < 2)
        throw PreconditionError("document \"" + doc.text_id + "\" too short for a network (" +
                                std::to_string(doc.size()) + " tokens)");
    CoocNetwork net;
    std::unordered_map<std::string, NodeId> index;
    std::vector<NodeId> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc.tokens) {
        auto [it, inserted] = index.emplace(tok, static_cast<NodeId>(net.words.size()));
        if (inserted) {
            net.words.push_back(tok);
            net.frequencies.push_back(0);
        }
        ++net.frequencies[it->second];
        ids.push_back(it->second);
    }
    for (std::size_t i = 1; i < ids.size(); ++i) {
        const NodeId u = ids[i - 1], v = ids[i];
        if (u != v) net.cooc_edges.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(net.cooc_edges.begin(), net.cooc_edges.end());
    net.cooc_edges.erase(std::unique(net.cooc_edges.begin(), net.cooc_edges.end()),
                         net.cooc_edges.end());
    return net;
}

SimilarityIndex::SimilarityIndex(const std::vector<std::string>& vocabulary,
                                 const EmbeddingTable& table) {
    std::vector<std::string> words;
    for (const auto& w : vocabulary)
        if (rows_.emplace(w, words.size()).second) words.push_back(w);
    n_ = words.size();
    upper_.assign(n_ > 1 ? n_ * (n_ - 1) / 2 : 0, std::numeric_limits<double>::quiet_NaN());

    std::vector<std::optional<std::span<const double>>> vecs(n_);
    std::vector<double> norms(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        vecs[i] = table.vector(words[i]);
        if (vecs[i]) norms[i] = *table.norm(words[i]);
    }
    const std::size_t dim = table.dim();
    for (std::size_t i = 0; i < n_; ++i) {
        if (!vecs[i] || norms[i] == 0.0) continue;
        const double* vi = vecs[i]->data();
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (!vecs[j] || norms[j] == 0.0) continue;
            const double* vj = vecs[j]->data();
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += vi[d] * vj[d];
            upper_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)] =
                std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
        }
    }
}

std::optional<std::size_t> SimilarityIndex::row(const std::string& word) const {
    auto it = rows_.find(word);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

double SimilarityIndex::at(std::size_t i, std::size_t j) const {
    if (i == j || i >= n_ || j >= n_) return std::numeric_limits<double>::quiet_NaN();
    if (i > j) std::swap(i, j);
    return upper_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)];
}

double SimilarityIndex::get(const std::string& a, const std::string& b) const {
    auto ra = row(a), rb = row(b);
    if (!ra || !rb) return std::numeric_limits<double>::quiet_NaN();
    return at(*ra, *rb);
}

namespace {

// (smaller word, larger word) of an edge.
std::pair<const std::string&, const std::string&> word_pair(const CoocNetwork& net, Edge e) {
    const auto& x = net.words[e.a];
    const auto& y = net.words[e.b];
    return x < y ? std::pair<const std::string&, const std::string&>{x, y}
                 : std::pair<const std::string&, const std::string&>{y, x};
}

bool pair_less(const CoocNetwork& net, Edge l, Edge r) {
    auto lp = word_pair(net, l);
    auto rp = word_pair(net, r);
    return std::tie(lp.first, lp.second) < std::tie(rp.first, rp.second);
}

void check_plain(const CoocNetwork& net) {
    if (!net.virtual_edges.empty())
        throw PreconditionError("network already carries virtual edges");
}

CoocNetwork with_selection(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                           const std::vector<std::size_t>& order, std::size_t k,
                           Strategy strategy, double fraction) {
    CoocNetwork out = net;
    const std::size_t take = std::min(k, order.size());
    out.virtual_edges.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const auto& c = cands[order[i]];
        out.virtual_edges.push_back({c.pair.a, c.pair.b, c.weight});
    }
    std::sort(out.virtual_edges.begin(), out.virtual_edges.end(),
              [](const VirtualEdge& l, const VirtualEdge& r) {
                  return std::tie(l.a, l.b) < std::tie(r.a, r.b);
              });
    out.enrichment = {strategy, fraction, k, take};
    return out;
}

}  // namespace

std::vector<EdgeCandidate> candidates(const CoocNetwork& net, const SimilarityIndex& sims) {
    const std::size_t n = net.node_count();
    std::vector<bool> adjacent(n * n, false);
    for (const auto& e : net.cooc_edges) {
        adjacent[e.a * n + e.b] = true;
        adjacent[e.b * n + e.a] = true;
    }
    std::vector<std::optional<std::size_t>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = sims.row(net.words[i]);

    std::vector<EdgeCandidate> out;
    for (NodeId i = 0; i < n; ++i) {
        if (!rows[i]) continue;
        for (NodeId j = i + 1; j < n; ++j) {
            if (!rows[j] || adjacent[std::size_t{i} * n + j]) continue;
            const double w = sims.at(*rows[i], *rows[j]);
            if (!(w > 0.0)) continue;  // also rejects NaN
            out.push_back({{i, j}, w, std::nullopt});
        }
    }
    std::sort(out.begin(), out.end(), [&](const EdgeCandidate& l, const EdgeCandidate& r) {
        if (l.weight != r.weight) return l.weight > r.weight;
        return pair_less(net, l.pair, r.pair);
    });
    return out;
}

std::vector<EdgeCandidate> candidates(const CoocNetwork& net, const EmbeddingTable& table) {
    return candidates(net, SimilarityIndex(net.words, table));
}

std::size_t virtual_edge_budget(std::size_t cooc_edges, double fraction_percent) {
    if (!(fraction_percent >= 0.0 && fraction_percent <= 100.0))
        throw PreconditionError("fraction P must lie in [0, 100]");
    const double k = fraction_percent * static_cast<double>(cooc_edges) / 100.0;
    return static_cast<std::size_t>(std::floor(k + 0.5));
}

CoocNetwork enrich_global(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                          double fraction_percent) {
    check_plain(net);
    const std::size_t k = virtual_edge_budget(net.cooc_edge_count(), fraction_percent);
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), 0);
    return with_selection(net, cands, order, k, Strategy::Global, fraction_percent);
}

double disparity_alpha(double weight, double strength, std::size_t degree) {
    if (!(weight > 0.0)) throw PreconditionError("disparity_alpha: weight must be positive");
    if (!(strength >= weight))
        throw PreconditionError("disparity_alpha: strength must be at least the edge weight");
    if (degree == 0) throw PreconditionError("disparity_alpha: degree must be >= 1");
    if (degree == 1) return 1.0;
    const double pi = std::min(weight / strength, 1.0);
    return std::pow(1.0 - pi, static_cast<double>(degree - 1));
}

std::vector<double> local_significance(const CoocNetwork& net,
                                       const std::vector<EdgeCandidate>& cands) {
    const std::size_t n = net.node_count();
    std::vector<std::size_t> degree(n, 0);
    std::vector<double> strength(n, 0.0);
    for (const auto& e : net.cooc_edges) {
        ++degree[e.a];
        ++degree[e.b];
        strength[e.a] += 1.0;
        strength[e.b] += 1.0;
    }
    for (const auto& c : cands) {
        ++degree[c.pair.a];
        ++degree[c.pair.b];
        strength[c.pair.a] += c.weight;
        strength[c.pair.b] += c.weight;
    }
    std::vector<double> sig;
    sig.reserve(cands.size());
    for (const auto& c : cands) {
        const double from_a = disparity_alpha(c.weight, strength[c.pair.a], degree[c.pair.a]);
        const double from_b = disparity_alpha(c.weight, strength[c.pair.b], degree[c.pair.b]);
        sig.push_back(std::min(from_a, from_b));
    }
    return sig;
}

CoocNetwork enrich_local(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                         double fraction_percent) {
    check_plain(net);
    const std::size_t k = virtual_edge_budget(net.cooc_edge_count(), fraction_percent);
    const auto sig = local_significance(net, cands);
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        if (sig[l] != sig[r]) return sig[l] < sig[r];
        if (cands[l].weight != cands[r].weight) return cands[l].weight > cands[r].weight;
        return pair_less(net, cands[l].pair, cands[r].pair);
    });
    return with_selection(net, cands, order, k, Strategy::Local, fraction_percent);
}

CoocNetwork enrich(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                   Strategy strategy, double fraction_percent) {
    switch (strategy) {
        case Strategy::Global: return enrich_global(net, cands, fraction_percent);
        case Strategy::Local: return enrich_local(net, cands, fraction_percent);
        case Strategy::Original: break;
    }
    return net;
}

void write_dump(const CoocNetwork& net, std::ostream& out) {
    struct Line {
        std::string a, b;
        std::string rest;
    };
    std::vector<Line> lines;
    lines.reserve(net.cooc_edges.size() + net.virtual_edges.size());
    for (const auto& e : net.cooc_edges) {
        auto [x, y] = word_pair(net, e);
        lines.push_back({x, y, "C 1"});
    }
    char buf[40];
    for (const auto& v : net.virtual_edges) {
        auto [x, y] = word_pair(net, {v.a, v.b});
        std::snprintf(buf, sizeof buf, "V %.17g", v.weight);
        lines.push_back({x, y, buf});
    }
    std::sort(lines.begin(), lines.end(),
              [](const Line& l, const Line& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
    for (const auto& l : lines) out << l.a << ' ' << l.b << ' ' << l.rest << '\n';
}

std::string dump_string(const CoocNetwork& net) {
    std::ostringstream ss;
    write_dump(net, ss);
    return std::move(ss).str();
}

}  // namespace conet
