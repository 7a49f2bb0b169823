#include "radtrim/combine/combine.hpp"

#include <stdexcept>

#include "radtrim/core/errors.hpp"

namespace radtrim::combine {

namespace {

std::vector<double> row_mean(const std::vector<std::vector<double>>& rows, std::size_t horizon) {
    std::vector<double> out(horizon, 0.0);
    for (const auto& row : rows) {
        for (std::size_t h = 0; h < horizon; ++h) {
            out[h] += row[h];
        }
    }
    const double m = static_cast<double>(rows.size());
    for (double& v : out) {
        v /= m;
    }
    return out;
}

}  // namespace

CombinedForecast combine_equal(const core::ForecastPool& pool,
                               const std::vector<std::string>& keep,
                               const core::IntervalPool* intervals) {
    const core::ForecastPool sub = core::subset_pool(pool, keep);

    CombinedForecast combined;
    combined.members = sub.labels;
    combined.weight = 1.0 / static_cast<double>(sub.size());
    combined.points = row_mean(sub.points, sub.horizon);

    if (intervals != nullptr) {
        if (intervals->labels != pool.labels) {
            throw core::AlignmentError("combine_equal: interval labels do not match pool labels");
        }
        if (!intervals->lower.empty() && intervals->lower.front().size() != pool.horizon) {
            throw core::AlignmentError("combine_equal: interval horizon does not match pool");
        }
        const core::IntervalPool isub = core::subset_intervals(*intervals, keep);
        combined.lower = row_mean(isub.lower, sub.horizon);
        combined.upper = row_mean(isub.upper, sub.horizon);
    }
    return combined;
}

}  // namespace radtrim::combine
