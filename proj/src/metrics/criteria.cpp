#include "radtrim/metrics/criteria.hpp"

#include <stdexcept>

namespace radtrim::metrics {

double msec(std::span<const double> f_i, std::span<const double> f_j) {
    if (f_i.size() != f_j.size() || f_i.empty()) {
        throw std::invalid_argument("msec: vectors must have equal nonzero length");
    }
    double sum = 0.0;
    for (std::size_t h = 0; h < f_i.size(); ++h) {
        const double d = f_i[h] - f_j[h];
        sum += d * d;
    }
    return sum / static_cast<double>(f_i.size());
}

PoolCriteria pool_criteria(const core::ForecastPool& pool, std::span<const double> actuals) {
    if (actuals.size() != pool.horizon) {
        throw std::invalid_argument("pool_criteria: actuals length must equal pool horizon");
    }
    const std::size_t m = pool.size();
    PoolCriteria c;
    c.per_forecaster_mse.resize(m);
    c.pairwise_msec.assign(m, std::vector<double>(m, 0.0));

    double mse_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        c.per_forecaster_mse[i] = msec(pool.points[i], actuals);
        mse_sum += c.per_forecaster_mse[i];
    }
    c.avg_mse = mse_sum / static_cast<double>(m);

    double msec_sum = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = msec(pool.points[i], pool.points[j]);
            c.pairwise_msec[i][j] = v;
            c.pairwise_msec[j][i] = v;
            msec_sum += v;
        }
    }
    c.avg_msec = msec_sum / (static_cast<double>(m) * static_cast<double>(m));
    return c;
}

double adt(const PoolCriteria& criteria, double kappa) {
    if (kappa < 0.0 || kappa > 1.0) {
        throw std::invalid_argument("adt: kappa outside [0,1]");
    }
    return criteria.avg_mse - kappa * criteria.avg_msec;
}

std::optional<double> reldiv(const PoolCriteria& criteria) {
    if (criteria.avg_mse == 0.0) {
        return std::nullopt;
    }
    return criteria.avg_msec / criteria.avg_mse;
}

}  // namespace radtrim::metrics
