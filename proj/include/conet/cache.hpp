#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "conet/metrics.hpp"

namespace conet {

std::string sha256_hex(std::string_view bytes);

// Content key of a metric evaluation: the simple graph actually measured, the
// top-word node ids and every metric option. Networks are a deterministic
// function of (text bytes, configuration cell, seed), so this key covers them
// and lets identical networks from different cells share an entry.
std::string metric_cache_key(const SimpleGraph& g, std::span<const NodeId> top_nodes,
                             const MetricOptions& opts);

// One file per key under a directory. Values are stored as hex floats so a
// warm read reproduces a cold computation bit for bit. Writes go through a
// temporary file and a rename, so concurrent writers of the same key are safe.
class MetricCache {
public:
    explicit MetricCache(std::filesystem::path dir);

    std::optional<MetricVector> get(const std::string& key) const;
    void put(const std::string& key, const MetricVector& mv) const;

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

std::string serialize_metric_vector(const MetricVector& mv);
std::optional<MetricVector> deserialize_metric_vector(const std::string& text);

}  // namespace conet
