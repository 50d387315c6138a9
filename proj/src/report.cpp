#include "conet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "conet/csv.hpp"
#include "conet/error.hpp"

namespace conet {

namespace {

std::string_view stopword_name(bool filtered) { return filtered ? "filter" : "keep"; }

std::string format_count(std::size_t v) { return std::to_string(v); }

std::string format_bool(const std::optional<bool>& b) {
    if (!b) return {};
    return *b ? "true" : "false";
}

auto key_tuple(const CellKey& k) {
    return std::make_tuple(k.size, stopword_name(k.stopwords_filtered), to_string(k.strategy),
                           k.fraction, to_string(k.metric), to_string(k.summary));
}

std::vector<std::string> key_fields(const CellKey& k) {
    return {std::to_string(k.size),           std::string(stopword_name(k.stopwords_filtered)),
            std::string(to_string(k.strategy)), format_real(k.fraction),
            std::string(to_string(k.metric)),   std::string(to_string(k.summary))};
}

double parse_real(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError("bad number \"" + s + "\"", line);
    return v;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw FormatError("bad count \"" + s + "\"", line);
    return v;
}

std::optional<bool> parse_opt_bool(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    if (s == "true") return true;
    if (s == "false") return false;
    throw FormatError("bad boolean \"" + s + "\"", line);
}

CellKey parse_key(const std::vector<std::string>& f, std::size_t at, std::size_t line) {
    CellKey k;
    k.size = parse_count(f[at], line);
    if (f[at + 1] == "keep") k.stopwords_filtered = false;
    else if (f[at + 1] == "filter") k.stopwords_filtered = true;
    else throw FormatError("bad stopwords value \"" + f[at + 1] + "\"", line);
    try {
        k.strategy = parse_strategy(f[at + 2]);
        k.metric = parse_metric(f[at + 4]);
        k.summary = parse_summary(f[at + 5]);
    } catch (const Error& e) {
        throw FormatError(e.what(), line);
    }
    k.fraction = parse_real(f[at + 3], line);
    return k;
}

// Splits into rows, checks the header and field counts.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_rows(const std::string& text,
                                                                       const char* header) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != header) throw FormatError("unexpected header \"" + line + "\"", 1);
            width = csv::split(header).size();
            continue;
        }
        if (line.empty()) continue;
        auto fields = csv::split(line);
        if (fields.size() != width)
            throw FormatError("expected " + std::to_string(width) + " fields, got " +
                                  std::to_string(fields.size()),
                              lineno);
        rows.emplace_back(lineno, std::move(fields));
    }
    if (lineno == 0) throw FormatError("missing header");
    return rows;
}

std::string emit(const char* header, const std::vector<std::vector<std::string>>& rows) {
    std::string out = header;
    out.push_back('\n');
    for (const auto& r : rows) {
        out += csv::join(r);
        out.push_back('\n');
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failure on " + path.string());
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool key_less(const CellKey& l, const CellKey& r) { return key_tuple(l) < key_tuple(r); }

std::string records_csv(std::vector<RecordRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const RecordRow& l, const RecordRow& r) {
        if (l.text_id != r.text_id) return l.text_id < r.text_id;
        return key_less(l.key, r.key);
    });
    std::vector<std::vector<std::string>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<std::string> f{r.text_id, r.dataset_tag, r.language};
        for (auto& k : key_fields(r.key)) f.push_back(std::move(k));
        for (double v : {r.x_raw, r.mu_r, r.sigma_r, r.x_norm, r.eps, r.d}) f.push_back(format_real(v));
        f.push_back(format_bool(r.informative));
        f.push_back(r.flags);
        out.push_back(std::move(f));
    }
    return emit(kRecordsHeader, out);
}

std::string informativeness_csv(std::vector<InformativenessRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return key_less(l.key, r.key); });
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        auto f = key_fields(r.key);
        f.push_back(format_real(r.informativeness));
        f.push_back(format_count(r.n_t));
        f.push_back(format_count(r.n_informative));
        f.push_back(format_count(r.n_undefined));
        out.push_back(std::move(f));
    }
    return emit(kInformativenessHeader, out);
}

std::string variability_csv(std::vector<VariabilityRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return key_less(l.key, r.key); });
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        auto f = key_fields(r.key);
        f.push_back(format_real(r.v_syntax));
        f.push_back(format_real(r.v_semantics));
        f.push_back(format_real(r.v_ratio));
        f.push_back(format_bool(r.syntax_dominant));
        out.push_back(std::move(f));
    }
    return emit(kVariabilityHeader, out);
}

std::vector<RecordRow> parse_records_csv(const std::string& text) {
    std::vector<RecordRow> rows;
    for (auto& [line, f] : read_rows(text, kRecordsHeader)) {
        RecordRow r;
        r.text_id = f[0];
        r.dataset_tag = f[1];
        r.language = f[2];
        r.key = parse_key(f, 3, line);
        r.x_raw = parse_real(f[9], line);
        r.mu_r = parse_real(f[10], line);
        r.sigma_r = parse_real(f[11], line);
        r.x_norm = parse_real(f[12], line);
        r.eps = parse_real(f[13], line);
        r.d = parse_real(f[14], line);
        r.informative = parse_opt_bool(f[15], line);
        r.flags = f[16];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<InformativenessRow> parse_informativeness_csv(const std::string& text) {
    std::vector<InformativenessRow> rows;
    for (auto& [line, f] : read_rows(text, kInformativenessHeader)) {
        InformativenessRow r;
        r.key = parse_key(f, 0, line);
        r.informativeness = parse_real(f[6], line);
        r.n_t = parse_count(f[7], line);
        r.n_informative = parse_count(f[8], line);
        r.n_undefined = parse_count(f[9], line);
        rows.push_back(r);
    }
    return rows;
}

std::vector<VariabilityRow> parse_variability_csv(const std::string& text) {
    std::vector<VariabilityRow> rows;
    for (auto& [line, f] : read_rows(text, kVariabilityHeader)) {
        VariabilityRow r;
        r.key = parse_key(f, 0, line);
        r.v_syntax = parse_real(f[6], line);
        r.v_semantics = parse_real(f[7], line);
        r.v_ratio = parse_real(f[8], line);
        r.syntax_dominant = parse_opt_bool(f[9], line);
        rows.push_back(r);
    }
    return rows;
}

void report_csv(const std::vector<RecordRow>& records,
                const std::vector<InformativenessRow>& informativeness,
                const std::vector<VariabilityRow>& variability,
                const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw Error("cannot create " + outdir.string() + ": " + ec.message());
    write_file(outdir / "records.csv", records_csv(records));
    write_file(outdir / "informativeness.csv", informativeness_csv(informativeness));
    write_file(outdir / "variability.csv", variability_csv(variability));
}

}  // namespace conet
