#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radtrim/core/pool.hpp"
#include "radtrim/core/selection.hpp"

namespace radtrim::trimming {

enum class Algorithm { none, robust_only, accuracy_only, diversity_only, rad, auto_rad };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

/// Quartiles follow one fixed convention everywhere (linear interpolation,
/// k = 1 + p(n-1)); the enum exists so configs can state it explicitly.
enum class QuartileRule { linear_interpolation };

struct TrimConfig {
    Algorithm algorithm = Algorithm::rad;
    double delta = 0.05;
    double kappa = 1.0;
    std::vector<double> kappa_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int min_subset = 2;
    bool apply_interval_prestep = false;
    /// Alternative reading of the elimination loop that commits a removal
    /// before testing significance; kept for reproduction experiments.
    bool commit_then_test = false;
    QuartileRule quartile_rule = QuartileRule::linear_interpolation;

    /// Throws std::invalid_argument when delta, kappa, the grid, or
    /// min_subset are out of range.
    void validate() const;
};

/// Criterion evaluated on a sub-pool against fixed actuals.
using Criterion =
    std::function<double(const core::ForecastPool&, std::span<const double> actuals)>;

Criterion criterion_avg_mse();
Criterion criterion_neg_avg_msec();
Criterion criterion_adt(double kappa);

/// Removes forecasters whose furthest-horizon bounds are Tukey outliers
/// across the pool, or whose lower bound exceeds the upper bound there.
/// Skipped (with a note) for pools of fewer than four members.
core::SubsetSelection interval_prestep(const core::ForecastPool& pool,
                                       const core::IntervalPool& intervals);

/// Removes forecasters whose absolute-error variance across the horizon
/// exceeds the Tukey upper fence of those variances. Skipped for H < 2.
core::SubsetSelection robustness_filter(const core::ForecastPool& pool,
                                        std::span<const double> actuals);

/// Greedy backward elimination: tentatively remove each remaining
/// forecaster, commit the removal minimizing the criterion iff the relative
/// reduction reaches delta, stop otherwise or at min_subset. Ties break
/// toward the lowest original index.
core::SubsetSelection backward_eliminate(const core::ForecastPool& pool,
                                         std::span<const double> actuals,
                                         const Criterion& criterion, double delta, int min_subset,
                                         bool commit_then_test = false);

/// Full dispatch over the six algorithms. `intervals` is required when the
/// config demands the interval pre-step.
core::SubsetSelection trim(const core::ForecastPool& pool, std::span<const double> actuals,
                           const TrimConfig& config,
                           const core::IntervalPool* intervals = nullptr);

}  // namespace radtrim::trimming
