#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radtrim/core/io.hpp"
#include "radtrim/core/selection.hpp"
#include "radtrim/harness/mcb.hpp"
#include "radtrim/metrics/evaluation.hpp"
#include "radtrim/trimming/trim.hpp"

namespace radtrim::harness {

struct AlgorithmSpec {
    std::string name;
    trimming::TrimConfig config;
};

enum class PoolSource { native_forecasters, ingested };

/// One batch run: dataset, pools (native or ingested), algorithms, output.
/// The seed is consumed only by synthetic-data generation.
struct RunSpec {
    std::string dataset_path;
    std::string pools_valid_path;  // ingested mode: validation-window pool file
    std::string pools_test_path;   // ingested mode: test-window pool file
    PoolSource pool_source = PoolSource::native_forecasters;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::string> metrics;  // empty = the full suite
    std::uint64_t seed = 0;
    std::string output_dir;
    int jobs = 1;  // <= 0 means hardware concurrency
    double interval_level = 0.95;
};

const std::vector<std::string>& all_metric_names();

/// The shipped six-algorithm benchmark set (None, R, A, D, RAD, AutoRAD)
/// with the interval pre-step on the pipelines that include Step 2.
std::vector<AlgorithmSpec> default_algorithms(double delta = 0.05);

struct AlgoOutcome {
    core::SubsetSelection selection;
    metrics::MetricReport report;
};

struct SeriesOutcome {
    std::string id;
    core::Frequency frequency = core::Frequency::other;
    int periodicity = 1;
    std::size_t horizon = 0;
    std::size_t pool_size = 0;
    std::optional<double> reldiv;  // of the full validation pool
    std::vector<AlgoOutcome> per_algorithm;
    bool failed = false;
    std::string error;
};

struct AggregateCell {
    std::string frequency;  // tag or "overall"
    std::string algorithm;
    std::string metric;
    std::optional<double> mean;  // over series where the metric is defined
    std::size_t n = 0;
    std::size_t excluded = 0;
};

struct McbPanel {
    std::string frequency;
    std::string metric;
    McbResult result;
};

struct KeptSizeRow {
    std::string algorithm;
    std::size_t size = 0;
    std::size_t count = 0;
};

struct SoftCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool holds = false;
};

struct AggregateReport {
    std::vector<std::string> algorithm_names;
    std::vector<std::string> metric_names;
    PoolSource pool_source = PoolSource::native_forecasters;
    double interval_level = 0.95;
    std::vector<SeriesOutcome> per_series;  // sorted by id
    std::vector<core::RejectedSeries> rejected;
    std::vector<AggregateCell> cells;
    std::vector<McbPanel> mcb;
    std::vector<KeptSizeRow> kept_sizes;
    std::vector<SoftCheck> soft_checks;
};

/// Full batch evaluation: trim on the validation window, combine the kept
/// subset's test forecasts, score against the test segment, aggregate per
/// frequency and overall, and attach MCB panels. Deterministic given the
/// spec; per-series failures are recorded and skipped.
AggregateReport run_benchmark(const RunSpec& spec);

struct StratumWinRate {
    std::string comparison;  // e.g. "rad_vs_a"
    std::size_t wins = 0;
    std::size_t comparisons = 0;  // after identical-subset exclusions
    std::size_t excluded_identical = 0;
};

struct StratumSummary {
    std::string name;  // low / moderate / high
    std::size_t n_series = 0;
    std::vector<StratumWinRate> win_rates;
};

struct ReldivStrata {
    double cut_low = 0.0;
    double cut_high = 0.0;
    bool cuts_from_data = false;
    std::size_t undefined_reldiv = 0;
    std::array<StratumSummary, 3> strata;
};

/// Splits series into low / moderate / high relative-diversity strata and
/// tabulates, per stratum, how often the trade-off pipelines beat the
/// accuracy-only one on MASE. Cuts default to the dataset's own RelDiv
/// first and third quartiles.
ReldivStrata reldiv_stratify(const AggregateReport& report, std::optional<double> cut_low,
                             std::optional<double> cut_high);

struct SweepRow {
    double delta = 0.0;
    std::string algorithm;
    std::string frequency;
    std::optional<double> mean_mase;
    std::size_t n = 0;
};

struct SweepTable {
    std::vector<double> grid;
    std::vector<SweepRow> rows;
};

/// Reruns trimming per delta and tabulates mean MASE. Pools are built once;
/// the delta-free algorithms (none, r) are computed once and replicated.
SweepTable delta_sweep(const RunSpec& spec, std::span<const double> grid);

/// The shipped 20-series synthetic dataset: seeded trend-plus-seasonality
/// ARMA processes across all six frequency tags.
std::vector<core::SplitSeries> gen_fixture(std::uint64_t seed);

}  // namespace radtrim::harness
