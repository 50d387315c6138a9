#include "conet/stats.hpp"

#include <cmath>
#include <limits>

#include "conet/error.hpp"

namespace conet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

Moments moments(std::span<const double> v, bool population) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    const double denom = population ? static_cast<double>(v.size())
                                    : static_cast<double>(v.size()) - 1.0;
    m.std = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
    return m;
}

}  // namespace

NormalizedMetric normalize(double x_raw, std::span<const double> baseline,
                           const NormalizeOptions& opts) {
    if (baseline.empty()) throw PreconditionError("normalize: empty baseline");
    NormalizedMetric out;
    out.x_raw = x_raw;

    auto undefined = [&](std::string reason) {
        out.x_norm = out.eps = out.d = out.d_signed = kNaN;
        out.informative = false;
        out.undefined_reason = std::move(reason);
        return out;
    };

    if (std::isnan(x_raw)) {
        out.baseline_mean = out.baseline_std = kNaN;
        return undefined("undefined_raw_value");
    }
    for (double b : baseline) {
        if (std::isnan(b)) {
            out.baseline_mean = out.baseline_std = kNaN;
            return undefined("undefined_baseline_value");
        }
    }
    const auto m = moments(baseline, opts.population_std);
    out.baseline_mean = m.mean;
    out.baseline_std = m.std;
    if (m.mean == 0.0) return undefined("zero_baseline_mean");

    double rel_std = m.std / std::abs(m.mean);
    if (rel_std < kRelativeNoiseFloor) rel_std = 0.0;

    out.x_norm = x_raw / m.mean;
    // sigma / mu * X; |mu| keeps eps nonnegative for negative-valued metrics.
    out.eps = rel_std * std::abs(out.x_norm);
    double offset = out.x_norm - 1.0;
    if (std::abs(offset) < kRelativeNoiseFloor) offset = 0.0;

    if (offset == 0.0) {
        out.d_signed = 0.0;
    } else if (out.eps == 0.0) {
        out.d_signed = offset > 0.0 ? kInf : -kInf;
    } else {
        out.d_signed = offset / out.eps;
    }
    out.d = opts.signed_distance ? out.d_signed : std::abs(out.d_signed);
    out.informative = out.d > 1.0;
    return out;
}

InformativenessEntry informativeness(std::span<const NormalizedMetric> cells, double threshold) {
    if (cells.empty()) throw PreconditionError("informativeness: no cells");
    InformativenessEntry e;
    for (const auto& c : cells) {
        if (!c.defined()) {
            ++e.n_undefined;
            continue;
        }
        ++e.n_t;
        if (c.d > threshold) ++e.n_informative;
    }
    e.informativeness = e.n_t ? 100.0 * static_cast<double>(e.n_informative) /
                                    static_cast<double>(e.n_t)
                              : kNaN;
    return e;
}

double coefficient_of_variation(std::span<const double> values) {
    if (values.size() < 2) throw PreconditionError("coefficient of variation needs >= 2 values");
    for (double v : values)
        if (!std::isfinite(v)) throw PreconditionError("coefficient of variation of non-finite values");
    const auto m = moments(values, true);
    if (m.mean == 0.0) throw PreconditionError("coefficient of variation with zero mean");
    return m.std / std::abs(m.mean);
}

VariabilityEntry variability_ratio(std::span<const double> syntax_values,
                                   std::span<const double> semantics_values) {
    VariabilityEntry e;
    e.v_syntax = coefficient_of_variation(syntax_values);
    e.v_semantics = coefficient_of_variation(semantics_values);
    if (e.v_semantics == 0.0) throw PreconditionError("semantic variability is zero");
    e.ratio = e.v_syntax / e.v_semantics;
    e.syntax_dominant = e.ratio > 1.0;
    return e;
}

}  // namespace conet
