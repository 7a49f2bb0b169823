#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "radtrim/core/series.hpp"

namespace radtrim::metrics {

/// Mean absolute scaled error. The denominator is the in-sample seasonal
/// naive MAE over t = s+1..T; with a constant in-sample series it is zero
/// and the metric is undefined (nullopt). If s is not smaller than the
/// in-sample length the denominator falls back to s = 1.
std::optional<double> mase(std::span<const double> test, std::span<const double> forecast,
                           std::span<const double> insample, int s);

/// Symmetric MAPE on the 0..200 scale, |y|+|f| in the denominator without
/// the halving found in some variants. 0/0 terms contribute zero; the count
/// of such terms is reported through zero_terms when non-null.
double smape(std::span<const double> test, std::span<const double> forecast,
             std::size_t* zero_terms = nullptr);

/// Mean signed error scaled by the in-sample mean; positive when forecasts
/// undershoot. Undefined when the in-sample mean is zero.
std::optional<double> bias(std::span<const double> test, std::span<const double> forecast,
                           std::span<const double> insample);

/// Mean scaled interval score: width plus 2/alpha penalties for actuals
/// outside the bounds, scaled by the same seasonal-naive MAE as MASE.
std::optional<double> msis(std::span<const double> test, std::span<const double> lower,
                           std::span<const double> upper, std::span<const double> insample, int s,
                           double alpha);

/// (coverage, upper coverage): fraction of actuals inside [l,u] and
/// fraction not above u.
std::pair<double, double> coverage_stats(std::span<const double> test,
                                         std::span<const double> lower,
                                         std::span<const double> upper);

/// Mean interval width scaled by the in-sample mean.
std::optional<double> spread(std::span<const double> lower, std::span<const double> upper,
                             std::span<const double> insample);

/// Seasonal-naive in-sample MAE, the shared MASE/MSIS denominator.
/// seasonal_fallback is set when s >= insample length forced s = 1.
double seasonal_naive_mae(std::span<const double> insample, int s,
                          bool* seasonal_fallback = nullptr);

/// All measures for one combined forecast. Interval fields stay empty when
/// the forecast carries no bounds; undefined values stay empty and are
/// excluded from aggregation by callers.
struct MetricReport {
    std::optional<double> mase;
    std::optional<double> smape;
    std::optional<double> bias;
    std::optional<double> msis;
    std::optional<double> coverage;
    std::optional<double> upper_coverage;
    std::optional<double> spread;
    std::size_t smape_zero_terms = 0;
    bool seasonal_fallback = false;
};

/// Scores a forecast of the test window. The in-sample history is
/// train + valid; alpha comes from the interval level (1 - level).
MetricReport score_test_window(const core::SplitSeries& series, std::span<const double> points,
                               const std::vector<double>* lower, const std::vector<double>* upper,
                               double interval_level);

}  // namespace radtrim::metrics
