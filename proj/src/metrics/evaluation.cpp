#include "radtrim/metrics/evaluation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radtrim::metrics {

namespace {

void require_equal_lengths(std::span<const double> a, std::span<const double> b,
                           const char* what) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument(std::string(what) + ": vectors must have equal nonzero length");
    }
}

}  // namespace

double seasonal_naive_mae(std::span<const double> insample, int s, bool* seasonal_fallback) {
    if (seasonal_fallback != nullptr) {
        *seasonal_fallback = false;
    }
    const std::size_t t_len = insample.size();
    if (t_len < 2) {
        throw std::invalid_argument("seasonal_naive_mae: in-sample length must be at least 2");
    }
    std::size_t lag = s < 1 ? 1 : static_cast<std::size_t>(s);
    if (lag >= t_len) {
        lag = 1;
        if (seasonal_fallback != nullptr) {
            *seasonal_fallback = true;
        }
    }
    double sum = 0.0;
    for (std::size_t t = lag; t < t_len; ++t) {
        sum += std::fabs(insample[t] - insample[t - lag]);
    }
    return sum / static_cast<double>(t_len - lag);
}

std::optional<double> mase(std::span<const double> test, std::span<const double> forecast,
                           std::span<const double> insample, int s) {
    require_equal_lengths(test, forecast, "mase");
    const double denom = seasonal_naive_mae(insample, s);
    if (denom == 0.0) {
        return std::nullopt;
    }
    double abs_err = 0.0;
    for (std::size_t h = 0; h < test.size(); ++h) {
        abs_err += std::fabs(test[h] - forecast[h]);
    }
    return abs_err / static_cast<double>(test.size()) / denom;
}

double smape(std::span<const double> test, std::span<const double> forecast,
             std::size_t* zero_terms) {
    require_equal_lengths(test, forecast, "smape");
    double sum = 0.0;
    std::size_t zeros = 0;
    for (std::size_t h = 0; h < test.size(); ++h) {
        const double denom = std::fabs(test[h]) + std::fabs(forecast[h]);
        if (denom == 0.0) {
            ++zeros;
        } else {
            sum += std::fabs(test[h] - forecast[h]) / denom;
        }
    }
    if (zero_terms != nullptr) {
        *zero_terms = zeros;
    }
    return 200.0 * sum / static_cast<double>(test.size());
}

std::optional<double> bias(std::span<const double> test, std::span<const double> forecast,
                           std::span<const double> insample) {
    require_equal_lengths(test, forecast, "bias");
    if (insample.empty()) {
        throw std::invalid_argument("bias: empty in-sample history");
    }
    double insample_sum = 0.0;
    for (double v : insample) {
        insample_sum += v;
    }
    const double insample_mean = insample_sum / static_cast<double>(insample.size());
    if (insample_mean == 0.0) {
        return std::nullopt;
    }
    double err_sum = 0.0;
    for (std::size_t h = 0; h < test.size(); ++h) {
        err_sum += test[h] - forecast[h];
    }
    return err_sum / static_cast<double>(test.size()) / insample_mean;
}

std::optional<double> msis(std::span<const double> test, std::span<const double> lower,
                           std::span<const double> upper, std::span<const double> insample, int s,
                           double alpha) {
    require_equal_lengths(test, lower, "msis");
    require_equal_lengths(test, upper, "msis");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("msis: alpha outside (0,1)");
    }
    const double denom = seasonal_naive_mae(insample, s);
    if (denom == 0.0) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (std::size_t h = 0; h < test.size(); ++h) {
        double score = upper[h] - lower[h];
        if (test[h] < lower[h]) {
            score += 2.0 / alpha * (lower[h] - test[h]);
        }
        if (test[h] > upper[h]) {
            score += 2.0 / alpha * (test[h] - upper[h]);
        }
        sum += score;
    }
    return sum / static_cast<double>(test.size()) / denom;
}

std::pair<double, double> coverage_stats(std::span<const double> test,
                                         std::span<const double> lower,
                                         std::span<const double> upper) {
    require_equal_lengths(test, lower, "coverage_stats");
    require_equal_lengths(test, upper, "coverage_stats");
    std::size_t inside = 0;
    std::size_t below_upper = 0;
    for (std::size_t h = 0; h < test.size(); ++h) {
        if (test[h] >= lower[h] && test[h] <= upper[h]) {
            ++inside;
        }
        if (test[h] <= upper[h]) {
            ++below_upper;
        }
    }
    const double n = static_cast<double>(test.size());
    return {static_cast<double>(inside) / n, static_cast<double>(below_upper) / n};
}

std::optional<double> spread(std::span<const double> lower, std::span<const double> upper,
                             std::span<const double> insample) {
    require_equal_lengths(lower, upper, "spread");
    if (insample.empty()) {
        throw std::invalid_argument("spread: empty in-sample history");
    }
    double insample_sum = 0.0;
    for (double v : insample) {
        insample_sum += v;
    }
    const double insample_mean = insample_sum / static_cast<double>(insample.size());
    if (insample_mean == 0.0) {
        return std::nullopt;
    }
    double width = 0.0;
    for (std::size_t h = 0; h < lower.size(); ++h) {
        width += upper[h] - lower[h];
    }
    return width / static_cast<double>(lower.size()) / insample_mean;
}

MetricReport score_test_window(const core::SplitSeries& series, std::span<const double> points,
                               const std::vector<double>* lower, const std::vector<double>* upper,
                               double interval_level) {
    if (points.size() != series.test.size()) {
        throw std::invalid_argument("score_test_window: forecast/test length mismatch");
    }
    const std::vector<double> insample = series.insample();
    MetricReport report;
    bool fallback = false;
    seasonal_naive_mae(insample, series.periodicity, &fallback);
    report.seasonal_fallback = fallback;
    report.mase = mase(series.test, points, insample, series.periodicity);
    report.smape = smape(series.test, points, &report.smape_zero_terms);
    report.bias = bias(series.test, points, insample);
    if (lower != nullptr && upper != nullptr) {
        const double alpha = 1.0 - interval_level;
        report.msis = msis(series.test, *lower, *upper, insample, series.periodicity, alpha);
        const auto [cov, ucov] = coverage_stats(series.test, *lower, *upper);
        report.coverage = cov;
        report.upper_coverage = ucov;
        report.spread = spread(*lower, *upper, insample);
    }
    return report;
}

}  // namespace radtrim::metrics
