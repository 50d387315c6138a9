#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "conet/corpus.hpp"
#include "conet/embeddings.hpp"

namespace conet {

using NodeId = std::uint32_t;

// Undirected pair, always stored with a < b.
struct Edge {
    NodeId a = 0;
    NodeId b = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct VirtualEdge {
    NodeId a = 0;
    NodeId b = 0;
    double weight = 0.0;  // cosine similarity, in (0, 1]

    friend bool operator==(const VirtualEdge&, const VirtualEdge&) = default;
};

enum class Strategy { Original, Global, Local };

std::string_view to_string(Strategy s);
// Accepts "original", "global", "local" (case-insensitive). Throws ConfigError.
Strategy parse_strategy(std::string_view s);

// Outcome of one enrichment pass.
struct EnrichmentInfo {
    Strategy strategy = Strategy::Original;
    double fraction = 0.0;        // P, percent of N_E
    std::size_t requested = 0;    // K
    std::size_t added = 0;        // min(K, |candidates|)

    bool shortfall() const noexcept { return added < requested; }
};

struct CoocNetwork {
    std::vector<std::string> words;        // node id -> word, in first-occurrence order
    std::vector<std::size_t> frequencies;  // node id -> token count in the source document
    std::vector<Edge> cooc_edges;          // sorted
    std::vector<VirtualEdge> virtual_edges;
    EnrichmentInfo enrichment;

    std::size_t node_count() const noexcept { return words.size(); }
    // N_E: number of co-occurrence edges.
    std::size_t cooc_edge_count() const noexcept { return cooc_edges.size(); }
    std::optional<NodeId> find(const std::string& word) const;
};

// Nodes are the unique tokens; one unweighted edge per distinct adjacent pair.
// Throws PreconditionError for documents with fewer than two tokens.
CoocNetwork build_cooc(const Document& doc);

struct EdgeCandidate {
    Edge pair;
    double weight = 0.0;                // w_ij
    std::optional<double> significance; // min(alpha_ij, alpha_ji), local strategy only
};

// Pairwise cosine similarities over a fixed vocabulary, computed once and
// shared between a document and its shuffles (which have the same vocabulary).
class SimilarityIndex {
public:
    SimilarityIndex(const std::vector<std::string>& vocabulary, const EmbeddingTable& table);

    // NaN when the cosine is absent.
    double get(const std::string& a, const std::string& b) const;
    std::optional<std::size_t> row(const std::string& word) const;
    double at(std::size_t i, std::size_t j) const;

private:
    std::size_t n_ = 0;
    std::unordered_map<std::string, std::size_t> rows_;
    std::vector<double> upper_;  // strict upper triangle, row-major
};

// Every non-adjacent node pair with a present, positive cosine, sorted by
// weight descending, ties by the (smaller word, larger word) pair ascending.
std::vector<EdgeCandidate> candidates(const CoocNetwork& net, const EmbeddingTable& table);
std::vector<EdgeCandidate> candidates(const CoocNetwork& net, const SimilarityIndex& sims);

// K = round-half-up(P / 100 * N_E).
std::size_t virtual_edge_budget(std::size_t cooc_edges, double fraction_percent);

CoocNetwork enrich_global(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                          double fraction_percent);

// Disparity-filter significance of an edge seen from one endpoint:
// 1 - (k-1) * integral_0^pi (1-x)^(k-2) dx = (1 - pi)^(k-1), pi = w / strength.
// Lower is more significant; degree-1 endpoints return 1.
double disparity_alpha(double weight, double strength, std::size_t degree);

// Significance of every candidate on the union graph (co-occurrence edges at
// weight 1 plus all candidates), parallel to `cands`.
std::vector<double> local_significance(const CoocNetwork& net,
                                       const std::vector<EdgeCandidate>& cands);

CoocNetwork enrich_local(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                         double fraction_percent);

// Dispatches on strategy; Original returns the network unchanged.
CoocNetwork enrich(const CoocNetwork& net, const std::vector<EdgeCandidate>& cands,
                   Strategy strategy, double fraction_percent);

// `word_a word_b {C|V} weight` per edge, word_a < word_b, lines sorted.
void write_dump(const CoocNetwork& net, std::ostream& out);
std::string dump_string(const CoocNetwork& net);

}  // namespace conet
