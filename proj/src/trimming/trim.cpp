#include "radtrim/trimming/trim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radtrim/combine/combine.hpp"
#include "radtrim/metrics/criteria.hpp"
#include "radtrim/util/stats.hpp"

namespace radtrim::trimming {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::none: return "none";
        case Algorithm::robust_only: return "r";
        case Algorithm::accuracy_only: return "a";
        case Algorithm::diversity_only: return "d";
        case Algorithm::rad: return "rad";
        case Algorithm::auto_rad: return "autorad";
    }
    return "unknown";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
    if (name == "none") return Algorithm::none;
    if (name == "r" || name == "robust" || name == "robust_only") return Algorithm::robust_only;
    if (name == "a" || name == "accuracy" || name == "accuracy_only")
        return Algorithm::accuracy_only;
    if (name == "d" || name == "diversity" || name == "diversity_only")
        return Algorithm::diversity_only;
    if (name == "rad") return Algorithm::rad;
    if (name == "autorad" || name == "auto_rad") return Algorithm::auto_rad;
    return std::nullopt;
}

void TrimConfig::validate() const {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("trim config: delta must be a finite value >= 0");
    }
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw std::invalid_argument("trim config: kappa must lie in [0,1]");
    }
    if (kappa_grid.empty()) {
        throw std::invalid_argument("trim config: kappa grid must be nonempty");
    }
    for (double k : kappa_grid) {
        if (!(k >= 0.0 && k <= 1.0)) {
            throw std::invalid_argument("trim config: kappa grid values must lie in [0,1]");
        }
    }
    if (min_subset < 2) {
        throw std::invalid_argument("trim config: min_subset must be at least 2");
    }
}

Criterion criterion_avg_mse() {
    return [](const core::ForecastPool& pool, std::span<const double> actuals) {
        return metrics::pool_criteria(pool, actuals).avg_mse;
    };
}

Criterion criterion_neg_avg_msec() {
    return [](const core::ForecastPool& pool, std::span<const double> actuals) {
        return -metrics::pool_criteria(pool, actuals).avg_msec;
    };
}

Criterion criterion_adt(double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw std::invalid_argument("criterion_adt: kappa outside [0,1]");
    }
    return [kappa](const core::ForecastPool& pool, std::span<const double> actuals) {
        return metrics::adt(metrics::pool_criteria(pool, actuals), kappa);
    };
}

core::SubsetSelection interval_prestep(const core::ForecastPool& pool,
                                       const core::IntervalPool& intervals) {
    if (intervals.labels != pool.labels) {
        throw std::invalid_argument("interval_prestep: interval labels do not match pool");
    }
    if (intervals.lower.empty() || intervals.lower.front().size() != pool.horizon) {
        throw std::invalid_argument("interval_prestep: interval horizon does not match pool");
    }

    core::SubsetSelection sel;
    const std::size_t m = pool.size();
    if (m < 4) {
        sel.kept = pool.labels;
        sel.notes.push_back("interval pre-step skipped: fewer than 4 forecasters");
        return sel;
    }

    const std::size_t last = intervals.lower.front().size() - 1;
    std::vector<double> lows(m);
    std::vector<double> ups(m);
    for (std::size_t i = 0; i < m; ++i) {
        lows[i] = intervals.lower[i][last];
        ups[i] = intervals.upper[i][last];
    }
    const util::TukeyFences low_fences = util::tukey_fences(lows);
    const util::TukeyFences up_fences = util::tukey_fences(ups);

    std::vector<bool> remove(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        remove[i] = lows[i] < low_fences.lower || ups[i] > up_fences.upper || lows[i] > ups[i];
    }
    if (std::all_of(remove.begin(), remove.end(), [](bool r) { return r; })) {
        sel.kept = pool.labels;
        sel.notes.push_back("interval pre-step skipped: would remove every forecaster");
        return sel;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (remove[i]) {
            sel.removed.push_back({pool.labels[i], core::RemovalReason::interval_outlier});
        } else {
            sel.kept.push_back(pool.labels[i]);
        }
    }
    return sel;
}

core::SubsetSelection robustness_filter(const core::ForecastPool& pool,
                                        std::span<const double> actuals) {
    if (actuals.size() != pool.horizon) {
        throw std::invalid_argument("robustness_filter: actuals length must equal pool horizon");
    }
    core::SubsetSelection sel;
    const std::size_t m = pool.size();
    if (pool.horizon < 2) {
        sel.kept = pool.labels;
        sel.notes.push_back("robustness filter skipped: horizon shorter than 2");
        return sel;
    }

    std::vector<double> variances(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> abs_errors(pool.horizon);
        for (std::size_t h = 0; h < pool.horizon; ++h) {
            abs_errors[h] = std::fabs(pool.points[i][h] - actuals[h]);
        }
        variances[i] = util::sample_variance(abs_errors);
    }
    const double fence = util::tukey_fences(variances).upper;

    std::vector<bool> remove(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        remove[i] = variances[i] > fence;
    }
    // The standard fence cannot exceed every value, but guard anyway.
    if (std::all_of(remove.begin(), remove.end(), [](bool r) { return r; })) {
        sel.kept = pool.labels;
        sel.notes.push_back("robustness filter skipped: fence would remove every forecaster");
        return sel;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (remove[i]) {
            sel.removed.push_back({pool.labels[i], core::RemovalReason::robustness});
        } else {
            sel.kept.push_back(pool.labels[i]);
        }
    }
    return sel;
}

namespace {

/// Relative reduction with an absolute-value denominator, so "reduction of
/// at least a delta fraction" reads the same for nonnegative criteria (MSE,
/// ADT at kappa=1) and nonpositive ones (-AvgMSEC). A zero previous value
/// makes any strict reduction significant.
double relative_reduction(double before, double after) {
    if (before == 0.0) {
        return after < before ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
    }
    return (before - after) / std::fabs(before);
}

}  // namespace

core::SubsetSelection backward_eliminate(const core::ForecastPool& pool,
                                         std::span<const double> actuals,
                                         const Criterion& criterion, double delta, int min_subset,
                                         bool commit_then_test) {
    if (pool.size() == 0) {
        throw std::invalid_argument("backward_eliminate: empty pool");
    }
    if (min_subset < 1) {
        throw std::invalid_argument("backward_eliminate: min_subset must be at least 1");
    }

    core::SubsetSelection sel;
    std::vector<std::size_t> remaining(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        remaining[i] = i;
    }

    auto labels_of = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::string> labels;
        labels.reserve(idx.size());
        for (std::size_t i : idx) {
            labels.push_back(pool.labels[i]);
        }
        return labels;
    };

    double current = criterion(core::subset_pool(pool, labels_of(remaining)), actuals);
    int iteration = 0;
    while (remaining.size() > static_cast<std::size_t>(min_subset)) {
        ++iteration;
        std::size_t best_pos = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
            std::vector<std::size_t> candidate = remaining;
            candidate.erase(candidate.begin() + static_cast<long>(pos));
            const double value =
                criterion(core::subset_pool(pool, labels_of(candidate)), actuals);
            if (value < best_value) {  // ties keep the earlier (lowest-index) candidate
                best_value = value;
                best_pos = pos;
            }
        }

        const double reduction = relative_reduction(current, best_value);
        const bool significant = reduction >= delta;
        const std::size_t candidate_index = remaining[best_pos];

        core::TraceEntry entry;
        entry.iteration = iteration;
        entry.candidate = pool.labels[candidate_index];
        entry.criterion_before = current;
        entry.criterion_after = best_value;
        entry.relative_reduction = reduction;
        entry.committed = commit_then_test ? true : significant;
        sel.trace.push_back(entry);

        if (entry.committed) {
            remaining.erase(remaining.begin() + static_cast<long>(best_pos));
            sel.removed.push_back(
                {pool.labels[candidate_index], core::RemovalReason::criterion_elimination});
            current = best_value;
        }
        if (!significant) {
            break;
        }
    }

    sel.kept = labels_of(remaining);
    return sel;
}

namespace {

/// Chains a stage's selection onto the accumulated result, keeping the
/// partition invariant over the original labels.
void absorb(core::SubsetSelection& total, const core::SubsetSelection& stage) {
    total.kept = stage.kept;
    total.removed.insert(total.removed.end(), stage.removed.begin(), stage.removed.end());
    total.trace.insert(total.trace.end(), stage.trace.begin(), stage.trace.end());
    total.notes.insert(total.notes.end(), stage.notes.begin(), stage.notes.end());
}

core::SubsetSelection run_rad_pipeline(const core::ForecastPool& pool,
                                       std::span<const double> actuals, const TrimConfig& config,
                                       const core::IntervalPool* intervals, double kappa) {
    core::SubsetSelection sel;
    sel.kept = pool.labels;
    core::ForecastPool current = pool;

    if (config.apply_interval_prestep) {
        if (intervals == nullptr) {
            throw std::invalid_argument("trim: interval pre-step requested without intervals");
        }
        absorb(sel, interval_prestep(current, *intervals));
        current = core::subset_pool(pool, sel.kept);
    }

    absorb(sel, robustness_filter(current, actuals));
    current = core::subset_pool(pool, sel.kept);

    absorb(sel, backward_eliminate(current, actuals, criterion_adt(kappa), config.delta,
                                   config.min_subset, config.commit_then_test));
    sel.selected_kappa = kappa;
    return sel;
}

double combined_validation_mse(const core::ForecastPool& pool,
                               const std::vector<std::string>& kept,
                               std::span<const double> actuals) {
    const combine::CombinedForecast combined = combine::combine_equal(pool, kept);
    double sum = 0.0;
    for (std::size_t h = 0; h < actuals.size(); ++h) {
        const double d = combined.points[h] - actuals[h];
        sum += d * d;
    }
    return sum / static_cast<double>(actuals.size());
}

}  // namespace

core::SubsetSelection trim(const core::ForecastPool& pool, std::span<const double> actuals,
                           const TrimConfig& config, const core::IntervalPool* intervals) {
    config.validate();
    if (actuals.size() != pool.horizon) {
        throw std::invalid_argument("trim: actuals length must equal pool horizon");
    }

    switch (config.algorithm) {
        case Algorithm::none: {
            core::SubsetSelection sel;
            sel.kept = pool.labels;
            return sel;
        }
        case Algorithm::robust_only: {
            core::SubsetSelection sel;
            sel.kept = pool.labels;
            core::ForecastPool current = pool;
            if (config.apply_interval_prestep) {
                if (intervals == nullptr) {
                    throw std::invalid_argument(
                        "trim: interval pre-step requested without intervals");
                }
                absorb(sel, interval_prestep(current, *intervals));
                current = core::subset_pool(pool, sel.kept);
            }
            absorb(sel, robustness_filter(current, actuals));
            return sel;
        }
        case Algorithm::accuracy_only:
            return backward_eliminate(pool, actuals, criterion_avg_mse(), config.delta,
                                      config.min_subset, config.commit_then_test);
        case Algorithm::diversity_only:
            return backward_eliminate(pool, actuals, criterion_neg_avg_msec(), config.delta,
                                      config.min_subset, config.commit_then_test);
        case Algorithm::rad:
            return run_rad_pipeline(pool, actuals, config, intervals, config.kappa);
        case Algorithm::auto_rad: {
            std::vector<double> grid = config.kappa_grid;
            std::sort(grid.begin(), grid.end());
            std::optional<core::SubsetSelection> best;
            double best_mse = std::numeric_limits<double>::infinity();
            for (double kappa : grid) {
                core::SubsetSelection candidate =
                    run_rad_pipeline(pool, actuals, config, intervals, kappa);
                const double mse = combined_validation_mse(pool, candidate.kept, actuals);
                if (mse < best_mse) {  // ties keep the earlier (smaller) kappa
                    best_mse = mse;
                    best = std::move(candidate);
                }
            }
            return *best;
        }
    }
    throw std::invalid_argument("trim: unknown algorithm");
}

}  // namespace radtrim::trimming
