#include "conet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "conet/error.hpp"

namespace conet {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        auto item = trim(value.substr(start, comma - start));
        if (!item.empty()) out.push_back(std::move(item));
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view s) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("bad value \"" + std::string(s) + "\" for " + std::string(key));
    return value;
}

bool parse_bool(std::string_view key, std::string_view s) {
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw ConfigError("bad boolean \"" + std::string(s) + "\" for " + std::string(key));
}

fs::path resolve(const fs::path& base, std::string_view value) {
    fs::path p{std::string(value)};
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::optional<std::uint64_t> RunConfig::synthetic_seed() const {
    constexpr std::string_view prefix = "synthetic:";
    if (embeddings.rfind(prefix, 0) != 0) return std::nullopt;
    return parse_number<std::uint64_t>("embeddings", std::string_view(embeddings).substr(prefix.size()));
}

void RunConfig::validate() const {
    if (analysis_manifest.empty()) throw ConfigError("analysis manifest is required");
    if (syntax_manifest.has_value() != semantics_manifest.has_value())
        throw ConfigError("syntax and semantics manifests must be given together");
    if (sizes.empty()) throw ConfigError("at least one text size is required");
    for (auto s : sizes)
        if (s == 0) throw ConfigError("text sizes must be positive");
    if (stopword_settings.empty()) throw ConfigError("at least one stopword setting is required");
    if (strategies.empty()) throw ConfigError("at least one strategy is required");
    if (fractions.empty()) throw ConfigError("at least one fraction is required");
    for (double p : fractions)
        if (!(p >= 0.0 && p <= 100.0)) throw ConfigError("fractions must lie in [0, 100]");
    if (replicas < 2) throw ConfigError("replica count must be >= 2");
    if (workers == 0) throw ConfigError("worker count must be >= 1");
    if (embedding_dim == 0) throw ConfigError("embedding dimension must be >= 1");
    if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("damping must lie in (0, 1)");
    if (embeddings.empty()) throw ConfigError("embeddings source is required");
    (void)synthetic_seed();  // throws on a malformed synthetic seed
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw_value,
                   const fs::path& base) {
    const std::string value = trim(raw_value);
    if (key == "analysis") {
        c.analysis_manifest = resolve(base, value);
    } else if (key == "syntax") {
        c.syntax_manifest = resolve(base, value);
    } else if (key == "semantics") {
        c.semantics_manifest = resolve(base, value);
    } else if (key == "sizes") {
        c.sizes.clear();
        for (const auto& item : split_list(value)) c.sizes.push_back(parse_number<std::size_t>(key, item));
    } else if (key == "stopwords") {
        if (value == "keep") c.stopword_settings = {false};
        else if (value == "filter") c.stopword_settings = {true};
        else if (value == "both") c.stopword_settings = {false, true};
        else throw ConfigError("stopwords must be keep, filter or both");
    } else if (key == "strategies") {
        c.strategies.clear();
        for (const auto& item : split_list(value)) {
            const Strategy s = parse_strategy(item);
            if (std::find(c.strategies.begin(), c.strategies.end(), s) == c.strategies.end())
                c.strategies.push_back(s);
        }
    } else if (key == "fractions") {
        c.fractions.clear();
        for (const auto& item : split_list(value)) {
            const double p = parse_number<double>(key, item);
            if (std::find(c.fractions.begin(), c.fractions.end(), p) == c.fractions.end())
                c.fractions.push_back(p);
        }
    } else if (key == "replicas") {
        c.replicas = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "embeddings") {
        c.embeddings = value.rfind("synthetic:", 0) == 0 ? value : resolve(base, value).string();
    } else if (key == "embedding_dim") {
        c.embedding_dim = parse_number<std::size_t>(key, value);
    } else if (key == "out") {
        c.out = resolve(base, value);
    } else if (key == "workers") {
        c.workers = parse_number<std::size_t>(key, value);
    } else if (key == "signed_distance") {
        c.signed_distance = parse_bool(key, value);
    } else if (key == "std") {
        if (value == "population") c.population_std = true;
        else if (value == "sample") c.population_std = false;
        else throw ConfigError("std must be population or sample");
    } else if (key == "stopword_order") {
        if (value == "truncate_first") c.stopword_order = StopwordOrder::TruncateFirst;
        else if (value == "filter_first") c.stopword_order = StopwordOrder::FilterFirst;
        else throw ConfigError("stopword_order must be truncate_first or filter_first");
    } else if (key == "variability_source") {
        if (value == "normalized") c.variability_source = VariabilitySource::Normalized;
        else if (value == "raw") c.variability_source = VariabilitySource::Raw;
        else throw ConfigError("variability_source must be normalized or raw");
    } else if (key == "stopword_dir") {
        c.stopword_dir = resolve(base, value);
    } else if (key == "damping") {
        c.damping = parse_number<double>(key, value);
    } else if (key == "cache") {
        c.use_cache = parse_bool(key, value);
    } else if (key == "cache_dir") {
        c.cache_dir = resolve(base, value);
    } else {
        throw ConfigError("unknown config key \"" + std::string(key) + "\"");
    }
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    RunConfig config;
    const fs::path base = path.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(config, trim(std::string_view(line).substr(0, eq)),
                          std::string_view(line).substr(eq + 1), base);
        } catch (const Error& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return config;
}

}  // namespace conet
