#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "radtrim/core/pool.hpp"
#include "radtrim/core/series.hpp"

namespace radtrim::core {

struct RejectedSeries {
    std::string id;
    RejectReason reason;
};

/// A batch of validated series plus the ones the admission rules rejected.
struct Dataset {
    std::vector<SplitSeries> series;
    std::vector<RejectedSeries> rejected;
};

/// Point forecasts (and optional interval bounds) for one series.
struct PoolRecord {
    ForecastPool points;
    std::optional<IntervalPool> intervals;
};

/// Ingested pools keyed by series id.
using PoolSet = std::map<std::string, PoolRecord>;

// Series files. CSV columns: id, segment{train|valid|test}, t, value with
// optional periodicity and frequency columns; JSON mirrors the same schema.
// See docs/formats.md.
Dataset load_series_csv(std::istream& in);
Dataset load_series_json(std::istream& in);
Dataset load_series_file(const std::string& path);
void save_series_csv(const std::vector<SplitSeries>& series, std::ostream& out);
void save_series_json(const std::vector<SplitSeries>& series, std::ostream& out);

// Pool files. CSV columns: series_id, forecaster, h, point[, lower, upper].
PoolSet load_pool_csv(std::istream& in, double interval_level = 0.95);
PoolSet load_pool_json(std::istream& in);
PoolSet load_pool_file(const std::string& path, double interval_level = 0.95);
void save_pool_csv(const PoolSet& pools, std::ostream& out);
void save_pool_json(const PoolSet& pools, std::ostream& out);

}  // namespace radtrim::core
