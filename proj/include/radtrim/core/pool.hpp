#pragma once

#include <string>
#include <vector>

namespace radtrim::core {

/**
 * An M x H matrix of point forecasts from labeled forecasters. Row order is
 * the canonical forecaster order, fixed at ingestion; every deterministic
 * tie-break downstream relies on it.
 */
struct ForecastPool {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> points;  // M rows of length horizon
    std::size_t horizon = 0;

    std::size_t size() const { return labels.size(); }

    /// Validating constructor helper: unique labels, rectangular finite
    /// rows, H >= 1, M >= 1. Throws ParseError on violation.
    static ForecastPool create(std::vector<std::string> labels,
                               std::vector<std::vector<double>> points);
};

/// Interval bounds aligned with a ForecastPool. Lower may exceed upper at
/// some horizon; that is a trimming signal, not an ingestion error.
struct IntervalPool {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> lower;
    std::vector<std::vector<double>> upper;
    double level = 0.95;

    std::size_t size() const { return labels.size(); }

    static IntervalPool create(std::vector<std::string> labels,
                               std::vector<std::vector<double>> lower,
                               std::vector<std::vector<double>> upper, double level);
};

/// Restricts a pool to the given labels, preserving original row order.
/// Throws std::invalid_argument on empty, duplicate, or unknown labels.
ForecastPool subset_pool(const ForecastPool& pool, const std::vector<std::string>& keep);

IntervalPool subset_intervals(const IntervalPool& intervals, const std::vector<std::string>& keep);

}  // namespace radtrim::core
