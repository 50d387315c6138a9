#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conet/config.hpp"
#include "conet/report.hpp"

namespace conet {

struct TextInput {
    std::string text_id;
    std::string dataset_tag;
    std::string language;
    std::string raw;  // UTF-8 text
};

// Texts plus the role(s) each plays. A text may sit in several roles; it is
// processed once.
struct PipelineInputs {
    std::vector<TextInput> texts;
    std::vector<std::size_t> analysis;   // indices into texts
    std::vector<std::size_t> syntax;
    std::vector<std::size_t> semantics;
};

struct PipelineResult {
    std::vector<RecordRow> records;
    std::vector<InformativenessRow> informativeness;
    std::vector<VariabilityRow> variability;
    std::vector<std::string> failures;  // "text_id: message", one per failed text/size/setting
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
};

// Loads the manifests named in `config` and reads every text. Throws
// ConfigError on any manifest problem.
PipelineInputs load_inputs(const RunConfig& config);

// Runs the full sweep. Configuration errors throw ConfigError before any work;
// failures of individual texts are recorded in the result instead.
PipelineResult run_pipeline(const RunConfig& config, const PipelineInputs& inputs);
PipelineResult run_pipeline(const RunConfig& config);

}  // namespace conet
