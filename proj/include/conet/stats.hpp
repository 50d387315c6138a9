#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace conet {

struct NormalizeOptions {
    bool population_std = true;    // divide by n; false divides by n - 1
    bool signed_distance = false;  // D = (X - 1) / eps instead of |X - 1| / eps
};

// A metric on a real text measured against its shuffled replicas.
struct NormalizedMetric {
    double x_raw = 0.0;
    double baseline_mean = 0.0;  // mu over the replicas
    double baseline_std = 0.0;   // sigma over the replicas
    double x_norm = 0.0;         // x_raw / mu
    double eps = 0.0;            // (sigma / mu) * x_norm
    double d = 0.0;              // distance under the configured convention
    double d_signed = 0.0;       // (x_norm - 1) / eps, kept for auditing
    bool informative = false;    // d > 1
    std::string undefined_reason;

    bool defined() const noexcept { return undefined_reason.empty(); }
};

// Relative noise floor: sigma / |mu| and |X - 1| below this are treated as
// exactly zero so that shuffle-invariant metrics (PageRank's all-node mean is
// always 1/n) do not report rounding noise as an infinite distance.
inline constexpr double kRelativeNoiseFloor = 1e-12;

// Never throws for numeric degeneracies; they come back undefined with a reason.
// Throws PreconditionError on an empty baseline.
NormalizedMetric normalize(double x_raw, std::span<const double> baseline,
                           const NormalizeOptions& opts = {});

struct InformativenessEntry {
    double informativeness = 0.0;  // percent, NaN when n_t == 0
    std::size_t n_t = 0;           // defined cells
    std::size_t n_informative = 0;
    std::size_t n_undefined = 0;
};

// I = 100 * |D > threshold| / N_T over the defined cells. Throws
// PreconditionError on an empty list.
InformativenessEntry informativeness(std::span<const NormalizedMetric> cells,
                                     double threshold = 1.0);

// Population sigma / |mu|. Throws PreconditionError for fewer than two values
// or a zero mean.
double coefficient_of_variation(std::span<const double> values);

struct VariabilityEntry {
    double v_syntax = 0.0;
    double v_semantics = 0.0;
    double ratio = 0.0;
    bool syntax_dominant = false;  // ratio > 1
};

// CV(syntax_values) / CV(semantics_values). Throws PreconditionError when
// either CV is not computable or the semantic CV is zero.
VariabilityEntry variability_ratio(std::span<const double> syntax_values,
                                   std::span<const double> semantics_values);

}  // namespace conet
