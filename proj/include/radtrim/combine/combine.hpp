#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radtrim/core/pool.hpp"

namespace radtrim::combine {

/// Equal-weight combination of a kept subset: the simple average of the
/// members' point forecasts, and of their interval bounds when present.
struct CombinedForecast {
    std::vector<double> points;
    std::optional<std::vector<double>> lower;
    std::optional<std::vector<double>> upper;
    std::vector<std::string> members;
    double weight = 0.0;  // 1 / |members|
};

CombinedForecast combine_equal(const core::ForecastPool& pool,
                               const std::vector<std::string>& keep,
                               const core::IntervalPool* intervals = nullptr);

}  // namespace radtrim::combine
