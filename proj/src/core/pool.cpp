#include "radtrim/core/pool.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "radtrim/core/errors.hpp"

namespace radtrim::core {

namespace {

void check_shape(const std::vector<std::string>& labels,
                 const std::vector<std::vector<double>>& rows, const char* what) {
    if (labels.empty()) {
        throw ParseError(std::string(what) + ": pool has no forecasters");
    }
    if (labels.size() != rows.size()) {
        throw ParseError(std::string(what) + ": label/row count mismatch");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw ParseError(std::string(what) + ": duplicate forecaster label '" + l + "'");
        }
    }
    const std::size_t h = rows.front().size();
    if (h == 0) {
        throw ParseError(std::string(what) + ": zero-length horizon");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != h) {
            throw ParseError(std::string(what) + ": ragged rows (forecaster '" + labels[i] + "')");
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) {
                throw ParseError(std::string(what) + ": non-finite value for forecaster '" +
                                 labels[i] + "'");
            }
        }
    }
}

std::vector<std::size_t> keep_indices(const std::vector<std::string>& labels,
                                      const std::vector<std::string>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("subset: empty keep list");
    }
    std::unordered_set<std::string> wanted;
    for (const auto& k : keep) {
        if (!wanted.insert(k).second) {
            throw std::invalid_argument("subset: duplicate label '" + k + "' in keep list");
        }
        if (std::find(labels.begin(), labels.end(), k) == labels.end()) {
            throw std::invalid_argument("subset: label '" + k + "' not found in pool");
        }
    }
    std::vector<std::size_t> idx;
    idx.reserve(keep.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (wanted.count(labels[i]) != 0) {
            idx.push_back(i);
        }
    }
    return idx;
}

}  // namespace

ForecastPool ForecastPool::create(std::vector<std::string> labels,
                                  std::vector<std::vector<double>> points) {
    check_shape(labels, points, "forecast pool");
    ForecastPool p;
    p.horizon = points.front().size();
    p.labels = std::move(labels);
    p.points = std::move(points);
    return p;
}

IntervalPool IntervalPool::create(std::vector<std::string> labels,
                                  std::vector<std::vector<double>> lower,
                                  std::vector<std::vector<double>> upper, double level) {
    check_shape(labels, lower, "interval pool (lower)");
    check_shape(labels, upper, "interval pool (upper)");
    if (lower.front().size() != upper.front().size()) {
        throw ParseError("interval pool: lower/upper horizon mismatch");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw ParseError("interval pool: level outside (0,1)");
    }
    IntervalPool p;
    p.labels = std::move(labels);
    p.lower = std::move(lower);
    p.upper = std::move(upper);
    p.level = level;
    return p;
}

ForecastPool subset_pool(const ForecastPool& pool, const std::vector<std::string>& keep) {
    const auto idx = keep_indices(pool.labels, keep);
    ForecastPool out;
    out.horizon = pool.horizon;
    out.labels.reserve(idx.size());
    out.points.reserve(idx.size());
    for (std::size_t i : idx) {
        out.labels.push_back(pool.labels[i]);
        out.points.push_back(pool.points[i]);
    }
    return out;
}

IntervalPool subset_intervals(const IntervalPool& intervals, const std::vector<std::string>& keep) {
    const auto idx = keep_indices(intervals.labels, keep);
    IntervalPool out;
    out.level = intervals.level;
    for (std::size_t i : idx) {
        out.labels.push_back(intervals.labels[i]);
        out.lower.push_back(intervals.lower[i]);
        out.upper.push_back(intervals.upper[i]);
    }
    return out;
}

}  // namespace radtrim::core
