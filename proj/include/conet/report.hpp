#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conet/metrics.hpp"
#include "conet/network.hpp"

namespace conet {

// Configuration coordinates shared by every report row.
struct CellKey {
    std::size_t size = 0;
    bool stopwords_filtered = false;
    Strategy strategy = Strategy::Original;
    double fraction = 0.0;
    Metric metric = Metric::AvgShortestPath;
    SummaryMode summary = SummaryMode::AllNodes;
};

struct RecordRow {
    std::string text_id;
    std::string dataset_tag;
    std::string language;
    CellKey key;
    double x_raw = 0.0;
    double mu_r = 0.0;
    double sigma_r = 0.0;
    double x_norm = 0.0;
    double eps = 0.0;
    double d = 0.0;
    std::optional<bool> informative;  // empty when undefined
    std::string flags;                // ';'-separated
};

struct InformativenessRow {
    CellKey key;
    double informativeness = 0.0;  // percent
    std::size_t n_t = 0;
    std::size_t n_informative = 0;
    std::size_t n_undefined = 0;
};

struct VariabilityRow {
    CellKey key;
    double v_syntax = 0.0;
    double v_semantics = 0.0;
    double v_ratio = 0.0;
    std::optional<bool> syntax_dominant;
};

inline constexpr const char* kRecordsHeader =
    "text_id,dataset_tag,language,size,stopwords,strategy,P,metric,summary,x_raw,mu_r,sigma_r,"
    "x_norm,eps,d,informative,flags";
inline constexpr const char* kInformativenessHeader =
    "size,stopwords,strategy,P,metric,summary,I,n_t,n_informative,n_undefined";
inline constexpr const char* kVariabilityHeader =
    "size,stopwords,strategy,P,metric,summary,v_syntax,v_semantics,v_ratio,syntax_dominant";

// printf("%.6g"), with "nan", "inf" and "-inf" spelled out.
std::string format_real(double v);

// Key-column ordering used for every report (strings bytewise, numbers by value).
bool key_less(const CellKey& l, const CellKey& r);

// Writers sort their rows before emitting.
std::string records_csv(std::vector<RecordRow> rows);
std::string informativeness_csv(std::vector<InformativenessRow> rows);
std::string variability_csv(std::vector<VariabilityRow> rows);

// Parsers for the same schemas; throw FormatError with a line number.
std::vector<RecordRow> parse_records_csv(const std::string& text);
std::vector<InformativenessRow> parse_informativeness_csv(const std::string& text);
std::vector<VariabilityRow> parse_variability_csv(const std::string& text);

// Writes records.csv, informativeness.csv and variability.csv into `outdir`.
void report_csv(const std::vector<RecordRow>& records,
                const std::vector<InformativenessRow>& informativeness,
                const std::vector<VariabilityRow>& variability,
                const std::filesystem::path& outdir);

}  // namespace conet
