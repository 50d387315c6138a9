#include "conet/cache.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "conet/error.hpp"

namespace conet {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFormat = "conet-metrics-v1";

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_real(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    out += buf;
    out.push_back('\n');
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string metric_cache_key(const SimpleGraph& g, std::span<const NodeId> top_nodes,
                             const MetricOptions& opts) {
    std::string bytes(kFormat);
    bytes.push_back('\n');
    append_real(bytes, opts.damping);
    append_real(bytes, opts.iteration.tolerance);
    append_u64(bytes, opts.iteration.max_iterations);
    append_u64(bytes, g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId w : g.neighbors(v)) {
            if (w > v) {
                append_u64(bytes, v);
                append_u64(bytes, w);
            }
        }
    }
    append_u64(bytes, ~std::uint64_t{0});
    for (NodeId t : top_nodes) append_u64(bytes, t);
    return sha256_hex(bytes);
}

std::string serialize_metric_vector(const MetricVector& mv) {
    std::string out(kFormat);
    out.push_back('\n');
    append_real(out, mv.component_coverage);
    for (const auto& v : mv.values) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%a", v.value);
        out += buf;
        out.push_back(' ');
        out += v.undefined_reason.empty() ? "-" : v.undefined_reason;
        out.push_back('\n');
    }
    return out;
}

std::optional<MetricVector> deserialize_metric_vector(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kFormat) return std::nullopt;
    MetricVector mv;
    if (!std::getline(in, line)) return std::nullopt;
    char* end = nullptr;
    mv.component_coverage = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) return std::nullopt;
    for (auto& v : mv.values) {
        if (!std::getline(in, line)) return std::nullopt;
        const auto space = line.find(' ');
        if (space == std::string::npos) return std::nullopt;
        const std::string num = line.substr(0, space);
        v.value = std::strtod(num.c_str(), &end);
        if (end != num.c_str() + num.size()) return std::nullopt;
        const std::string reason = line.substr(space + 1);
        v.undefined_reason = reason == "-" ? std::string{} : reason;
        if (!v.defined()) v.value = std::nan("");
    }
    return mv;
}

MetricCache::MetricCache(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::optional<MetricVector> MetricCache::get(const std::string& key) const {
    std::ifstream in(dir_ / key.substr(0, 2) / key, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_metric_vector(ss.str());
}

void MetricCache::put(const std::string& key, const MetricVector& mv) const {
    static std::atomic<std::uint64_t> counter{0};
    const fs::path shard = dir_ / key.substr(0, 2);
    std::error_code ec;
    fs::create_directories(shard, ec);
    if (ec) return;  // best effort
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    const fs::path tmp = shard / (key + ".tmp" + std::to_string(tid) + "." + std::to_string(counter++));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        out << serialize_metric_vector(mv);
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            return;
        }
    }
    fs::rename(tmp, shard / key, ec);
    if (ec) fs::remove(tmp, ec);
}

}  // namespace conet
