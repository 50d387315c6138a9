#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace conet {

// Immutable-after-load word -> dense vector map.
class EmbeddingTable {
public:
    EmbeddingTable(std::size_t dim, std::string source_id);

    // Throws PreconditionError on a wrong-length vector or a duplicate word.
    void add(const std::string& word, std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::string& source_id() const noexcept { return source_id_; }

    bool contains(const std::string& word) const { return index_.contains(word); }
    std::optional<std::span<const double>> vector(const std::string& word) const;
    // Euclidean norm, or nullopt for an absent word.
    std::optional<double> norm(const std::string& word) const;

    // Words in insertion order.
    const std::vector<std::string>& words() const noexcept { return words_; }

    friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

private:
    std::size_t dim_;
    std::string source_id_;
    std::vector<std::string> words_;
    std::vector<double> values_;  // row-major, words_.size() x dim_
    std::vector<double> norms_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Reads the word-vector text format: optional `<count> <dim>` header, then
// `word v1 ... vdim` rows. When `restrict_to` is given, only those words are
// kept. Later duplicates of a word are ignored.
EmbeddingTable load_vectors(const std::filesystem::path& path,
                            const std::unordered_set<std::string>* restrict_to = nullptr);

// Writes the table (with header) in a form load_vectors reads back exactly.
void write_vectors(const EmbeddingTable& table, const std::filesystem::path& path);

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Absent when either word is
// missing or has a zero vector.
std::optional<double> cosine(const EmbeddingTable& table, const std::string& a,
                             const std::string& b);

// Deterministic unit-norm Gaussian-direction vector per word; a pure function
// of (word, dim, seed).
EmbeddingTable synthetic_table(const std::vector<std::string>& vocabulary, std::size_t dim,
                               std::uint64_t seed);

}  // namespace conet
