#pragma once

#include <optional>
#include <span>
#include <vector>

#include "radtrim/core/pool.hpp"

namespace radtrim::metrics {

/**
 * Accuracy and diversity components of a forecast pool against one set of
 * actuals: per-forecaster MSE, the symmetric pairwise MSEC matrix, and
 * their pool-level averages. AvgMSEC uses the 1/M^2 normalization over the
 * strict upper triangle.
 */
struct PoolCriteria {
    std::vector<double> per_forecaster_mse;
    std::vector<std::vector<double>> pairwise_msec;  // M x M, zero diagonal
    double avg_mse = 0.0;
    double avg_msec = 0.0;
};

/// Mean squared pairwise difference between two forecast vectors. Zero
/// means identical forecasts; larger means more diverse.
double msec(std::span<const double> f_i, std::span<const double> f_j);

PoolCriteria pool_criteria(const core::ForecastPool& pool, std::span<const double> actuals);

/// Accuracy-diversity trade-off: avg_mse - kappa * avg_msec. At kappa = 1
/// this equals the MSE of the equal-weight combined forecast.
double adt(const PoolCriteria& criteria, double kappa);

/// AvgMSEC / AvgMSE. Undefined (nullopt) when avg_mse is zero.
std::optional<double> reldiv(const PoolCriteria& criteria);

}  // namespace radtrim::metrics
