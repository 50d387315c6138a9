#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conet/network.hpp"

namespace conet {

enum class StopwordOrder { TruncateFirst, FilterFirst };
enum class VariabilitySource { Normalized, Raw };

struct RunConfig {
    std::filesystem::path analysis_manifest;
    std::optional<std::filesystem::path> syntax_manifest;     // same content, many languages
    std::optional<std::filesystem::path> semantics_manifest;  // one language, many contents

    std::vector<std::size_t> sizes{200, 400, 800, 1000};
    std::vector<bool> stopword_settings{false, true};  // true = stopwords filtered
    std::vector<Strategy> strategies{Strategy::Original, Strategy::Global, Strategy::Local};
    std::vector<double> fractions{0, 25, 50, 75, 100};
    std::size_t replicas = 10;
    std::uint64_t seed = 42;

    // Path to a word-vector text file, or "synthetic:<seed>".
    std::string embeddings = "synthetic:0";
    std::size_t embedding_dim = 300;  // synthetic tables only

    std::filesystem::path out = "conet-out";
    std::size_t workers = 1;

    bool signed_distance = false;
    bool population_std = true;
    StopwordOrder stopword_order = StopwordOrder::TruncateFirst;
    VariabilitySource variability_source = VariabilitySource::Normalized;
    std::optional<std::filesystem::path> stopword_dir;
    double damping = 0.85;

    bool use_cache = true;
    std::optional<std::filesystem::path> cache_dir;  // default: <out>/cache

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    std::filesystem::path effective_cache_dir() const {
        return cache_dir ? *cache_dir : out / "cache";
    }
    std::optional<std::uint64_t> synthetic_seed() const;
};

// Flat `key = value` file; `#` starts a comment; lists are comma-separated.
// Relative paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

// Applies one key/value pair using the config-file vocabulary. `base` resolves
// relative paths. Throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base = {});

}  // namespace conet
