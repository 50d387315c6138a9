#include "conet/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "conet/error.hpp"
#include "conet/prng.hpp"

namespace conet {

EmbeddingTable::EmbeddingTable(std::size_t dim, std::string source_id)
    : dim_(dim), source_id_(std::move(source_id)) {
    if (dim_ == 0) throw PreconditionError("embedding dimension must be >= 1");
}

void EmbeddingTable::add(const std::string& word, std::span<const double> values) {
    if (values.size() != dim_)
        throw PreconditionError("vector for \"" + word + "\" has " + std::to_string(values.size()) +
                                " values, expected " + std::to_string(dim_));
    if (!index_.emplace(word, words_.size()).second)
        throw PreconditionError("duplicate word \"" + word + "\"");
    words_.push_back(word);
    values_.insert(values_.end(), values.begin(), values.end());
    double sq = 0.0;
    for (double v : values) sq += v * v;
    norms_.push_back(std::sqrt(sq));
}

std::optional<std::span<const double>> EmbeddingTable::vector(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(values_.data() + it->second * dim_, dim_);
}

std::optional<double> EmbeddingTable::norm(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return norms_[it->second];
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    if (a.dim_ != b.dim_ || a.size() != b.size()) return false;
    for (const auto& w : a.words_) {
        auto va = a.vector(w);
        auto vb = b.vector(w);
        if (!vb || !std::equal(va->begin(), va->end(), vb->begin())) return false;
    }
    return true;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) parts.push_back(line.substr(start, i - start));
    }
    return parts;
}

bool parse_unsigned(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable load_vectors(const std::filesystem::path& path,
                            const std::unordered_set<std::string>* restrict_to) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open vector file " + path.string());

    std::optional<EmbeddingTable> table;
    std::size_t dim = 0;
    std::string line;
    std::size_t lineno = 0;
    bool any_row = false;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto parts = split_spaces(line);
        if (parts.empty()) continue;

        if (!any_row && parts.size() == 2) {
            std::size_t count = 0, header_dim = 0;
            if (parse_unsigned(parts[0], count) && parse_unsigned(parts[1], header_dim)) {
                if (header_dim == 0) throw FormatError("header declares dimension 0", lineno);
                dim = header_dim;
                any_row = true;
                continue;
            }
        }
        any_row = true;

        const std::size_t found = parts.size() - 1;
        if (dim == 0) {
            if (found == 0) throw FormatError("row has no vector values", lineno);
            dim = found;
        }
        if (found != dim)
            throw FormatError("dimension mismatch: " + std::to_string(found) + " values, expected " +
                                  std::to_string(dim),
                              lineno);
        if (!table) table.emplace(dim, path.string());

        std::string word(parts[0]);
        if (restrict_to && !restrict_to->contains(word)) continue;
        if (table->contains(word)) continue;

        values.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto s = parts[i + 1];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), values[i]);
            if (ec != std::errc{} || ptr != s.data() + s.size())
                throw FormatError("malformed number \"" + std::string(s) + "\"", lineno);
        }
        table->add(word, values);
    }

    if (!any_row) throw FormatError("empty vector file " + path.string());
    if (!table) table.emplace(dim, path.string());
    return std::move(*table);
}

void write_vectors(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << table.size() << ' ' << table.dim() << '\n';
    char buf[32];
    for (const auto& w : table.words()) {
        out << w;
        const auto vec = *table.vector(w);
        for (double v : vec) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failure on " + path.string());
}

std::optional<double> cosine(const EmbeddingTable& table, const std::string& a,
                             const std::string& b) {
    auto va = table.vector(a);
    auto vb = table.vector(b);
    if (!va || !vb) return std::nullopt;
    const double na = *table.norm(a);
    const double nb = *table.norm(b);
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    double dot = 0.0;
    for (std::size_t i = 0; i < va->size(); ++i) dot += (*va)[i] * (*vb)[i];
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

EmbeddingTable synthetic_table(const std::vector<std::string>& vocabulary, std::size_t dim,
                               std::uint64_t seed) {
    EmbeddingTable table(dim, "synthetic:" + std::to_string(seed));
    std::vector<double> v(dim);
    for (const auto& word : vocabulary) {
        if (table.contains(word)) continue;
        Xoshiro256ss gen(derive_key(seed, word, dim));
        double sq = 0.0;
        do {
            // Box-Muller; both outputs used.
            for (std::size_t i = 0; i < dim; i += 2) {
                double u1 = gen.unit();
                while (u1 == 0.0) u1 = gen.unit();
                const double u2 = gen.unit();
                const double r = std::sqrt(-2.0 * std::log(u1));
                v[i] = r * std::cos(2.0 * std::numbers::pi * u2);
                if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
            }
            sq = 0.0;
            for (double x : v) sq += x * x;
        } while (sq == 0.0);
        const double n = std::sqrt(sq);
        for (double& x : v) x /= n;
        table.add(word, v);
    }
    return table;
}

}  // namespace conet
