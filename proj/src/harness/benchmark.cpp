#include "radtrim/harness/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "radtrim/combine/combine.hpp"
#include "radtrim/core/errors.hpp"
#include "radtrim/forecasters/models.hpp"
#include "radtrim/metrics/criteria.hpp"
#include "radtrim/util/rng.hpp"
#include "radtrim/util/stats.hpp"

namespace radtrim::harness {

const std::vector<std::string>& all_metric_names() {
    static const std::vector<std::string> names = {
        "mase", "smape", "bias", "msis", "coverage", "upper_coverage", "spread"};
    return names;
}

std::vector<AlgorithmSpec> default_algorithms(double delta) {
    std::vector<AlgorithmSpec> specs;
    for (trimming::Algorithm a :
         {trimming::Algorithm::none, trimming::Algorithm::robust_only,
          trimming::Algorithm::accuracy_only, trimming::Algorithm::diversity_only,
          trimming::Algorithm::rad, trimming::Algorithm::auto_rad}) {
        trimming::TrimConfig config;
        config.algorithm = a;
        config.delta = delta;
        config.apply_interval_prestep = a == trimming::Algorithm::robust_only ||
                                        a == trimming::Algorithm::rad ||
                                        a == trimming::Algorithm::auto_rad;
        specs.push_back({std::string(trimming::to_string(a)), config});
    }
    return specs;
}

namespace {

struct PreparedBatch;

struct PreparedSeries {
    core::SplitSeries series;
    core::ForecastPool valid_pool;
    std::optional<core::IntervalPool> valid_intervals;
    core::ForecastPool test_pool;
    std::optional<core::IntervalPool> test_intervals;
    std::optional<double> reldiv;
    bool failed = false;
    std::string error;
};

void prepare_one(PreparedSeries& p, const RunSpec& spec, const core::PoolSet* valid_pools,
                 const core::PoolSet* test_pools) {
    try {
        if (spec.pool_source == PoolSource::native_forecasters) {
            const auto kinds = forecasters::default_kinds(p.series.periodicity);
            forecasters::BuiltPools pools =
                forecasters::build_pool(p.series, kinds, spec.interval_level);
            p.valid_pool = std::move(pools.validation.points);
            p.valid_intervals = std::move(pools.validation.intervals);
            p.test_pool = std::move(pools.test.points);
            p.test_intervals = std::move(pools.test.intervals);
        } else {
            const auto vit = valid_pools->find(p.series.id);
            const auto tit = test_pools->find(p.series.id);
            if (vit == valid_pools->end() || tit == test_pools->end()) {
                throw core::AlignmentError("no ingested pool for series '" + p.series.id + "'");
            }
            p.valid_pool = vit->second.points;
            p.valid_intervals = vit->second.intervals;
            p.test_pool = tit->second.points;
            p.test_intervals = tit->second.intervals;
            if (p.valid_pool.labels != p.test_pool.labels) {
                throw core::AlignmentError("validation/test pools disagree on forecasters for '" +
                                           p.series.id + "'");
            }
        }
        if (p.valid_pool.horizon != p.series.valid.size()) {
            throw core::AlignmentError("validation pool horizon mismatch for '" + p.series.id +
                                       "'");
        }
        if (p.test_pool.horizon != p.series.test.size()) {
            throw core::AlignmentError("test pool horizon mismatch for '" + p.series.id + "'");
        }
        p.reldiv = metrics::reldiv(metrics::pool_criteria(p.valid_pool, p.series.valid));
    } catch (const std::exception& e) {
        p.failed = true;
        p.error = e.what();
    }
}

struct PreparedBatch {
    std::vector<PreparedSeries> series;
    std::vector<core::RejectedSeries> rejected;
};

PreparedBatch prepare_series(const RunSpec& spec) {
    core::Dataset dataset = core::load_series_file(spec.dataset_path);
    if (dataset.series.empty()) {
        throw core::ParseError("dataset '" + spec.dataset_path +
                               "' holds no admissible series");
    }
    std::sort(dataset.series.begin(), dataset.series.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });

    core::PoolSet valid_pools;
    core::PoolSet test_pools;
    if (spec.pool_source == PoolSource::ingested) {
        if (spec.pools_valid_path.empty() || spec.pools_test_path.empty()) {
            throw std::invalid_argument(
                "ingested pools need both a validation and a test pool file");
        }
        valid_pools = core::load_pool_file(spec.pools_valid_path, spec.interval_level);
        test_pools = core::load_pool_file(spec.pools_test_path, spec.interval_level);
    }

    std::vector<PreparedSeries> prepared(dataset.series.size());
    for (std::size_t i = 0; i < dataset.series.size(); ++i) {
        prepared[i].series = std::move(dataset.series[i]);
    }

    int jobs = spec.jobs;
    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) {
            jobs = 1;
        }
    }
    jobs = std::min<int>(jobs, static_cast<int>(prepared.size()));

    if (jobs <= 1) {
        for (auto& p : prepared) {
            prepare_one(p, spec, &valid_pools, &test_pools);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= prepared.size()) {
                    return;
                }
                prepare_one(prepared[i], spec, &valid_pools, &test_pools);
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }

    PreparedBatch batch;
    batch.series = std::move(prepared);
    batch.rejected = std::move(dataset.rejected);
    return batch;
}

SeriesOutcome evaluate_series(const PreparedSeries& p,
                              const std::vector<AlgorithmSpec>& algorithms,
                              double interval_level) {
    SeriesOutcome out;
    out.id = p.series.id;
    out.frequency = p.series.frequency;
    out.periodicity = p.series.periodicity;
    out.horizon = p.series.test.size();
    if (p.failed) {
        out.failed = true;
        out.error = p.error;
        return out;
    }
    out.pool_size = p.valid_pool.size();
    out.reldiv = p.reldiv;

    try {
        for (const AlgorithmSpec& algo : algorithms) {
            AlgoOutcome outcome;
            const core::IntervalPool* prestep_intervals =
                p.valid_intervals ? &*p.valid_intervals : nullptr;
            outcome.selection =
                trimming::trim(p.valid_pool, p.series.valid, algo.config, prestep_intervals);
            const core::IntervalPool* test_intervals =
                p.test_intervals ? &*p.test_intervals : nullptr;
            const combine::CombinedForecast combined =
                combine::combine_equal(p.test_pool, outcome.selection.kept, test_intervals);
            outcome.report = metrics::score_test_window(
                p.series, combined.points, combined.lower ? &*combined.lower : nullptr,
                combined.upper ? &*combined.upper : nullptr, interval_level);
            out.per_algorithm.push_back(std::move(outcome));
        }
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
        out.per_algorithm.clear();
    }
    return out;
}

std::optional<double> metric_value(const metrics::MetricReport& r, const std::string& name) {
    if (name == "mase") return r.mase;
    if (name == "smape") return r.smape;
    if (name == "bias") return r.bias;
    if (name == "msis") return r.msis;
    if (name == "coverage") return r.coverage;
    if (name == "upper_coverage") return r.upper_coverage;
    if (name == "spread") return r.spread;
    return std::nullopt;
}

std::vector<std::string> frequencies_present(const std::vector<SeriesOutcome>& outcomes) {
    std::vector<std::string> out;
    for (core::Frequency f :
         {core::Frequency::yearly, core::Frequency::quarterly, core::Frequency::monthly,
          core::Frequency::weekly, core::Frequency::daily, core::Frequency::hourly,
          core::Frequency::other}) {
        for (const auto& o : outcomes) {
            if (!o.failed && o.frequency == f) {
                out.emplace_back(to_string(f));
                break;
            }
        }
    }
    return out;
}

void aggregate(AggregateReport& report, const std::vector<std::string>& metric_names) {
    std::vector<std::string> groups = frequencies_present(report.per_series);
    groups.emplace_back("overall");

    for (const auto& freq : groups) {
        for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
            for (const auto& metric : metric_names) {
                AggregateCell cell;
                cell.frequency = freq;
                cell.algorithm = report.algorithm_names[a];
                cell.metric = metric;
                double sum = 0.0;
                for (const auto& s : report.per_series) {
                    if (s.failed) {
                        continue;
                    }
                    if (freq != "overall" && to_string(s.frequency) != freq) {
                        continue;
                    }
                    const auto v = metric_value(s.per_algorithm[a].report, metric);
                    if (v) {
                        sum += *v;
                        ++cell.n;
                    } else {
                        ++cell.excluded;
                    }
                }
                if (cell.n > 0) {
                    cell.mean = sum / static_cast<double>(cell.n);
                }
                report.cells.push_back(std::move(cell));
            }
        }

        for (const auto& metric : metric_names) {
            if (report.algorithm_names.size() < 2) {
                continue;
            }
            std::vector<std::vector<std::optional<double>>> scores(
                report.algorithm_names.size());
            for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
                for (const auto& s : report.per_series) {
                    if (s.failed) {
                        continue;
                    }
                    if (freq != "overall" && to_string(s.frequency) != freq) {
                        continue;
                    }
                    scores[a].push_back(metric_value(s.per_algorithm[a].report, metric));
                }
            }
            std::size_t complete = 0;
            if (!scores.front().empty()) {
                for (std::size_t i = 0; i < scores.front().size(); ++i) {
                    bool all = true;
                    for (const auto& row : scores) {
                        if (!row[i]) {
                            all = false;
                            break;
                        }
                    }
                    if (all) {
                        ++complete;
                    }
                }
            }
            if (complete < 2) {
                continue;
            }
            McbPanel panel;
            panel.frequency = freq;
            panel.metric = metric;
            panel.result = mcb_test(scores, report.algorithm_names, 0.05);
            report.mcb.push_back(std::move(panel));
        }
    }

    // Kept-size histograms per algorithm.
    for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
        std::map<std::size_t, std::size_t> histogram;
        for (const auto& s : report.per_series) {
            if (!s.failed) {
                ++histogram[s.per_algorithm[a].selection.kept.size()];
            }
        }
        for (const auto& [size, count] : histogram) {
            report.kept_sizes.push_back({report.algorithm_names[a], size, count});
        }
    }

    // Soft qualitative check: the trade-off pipeline should not lose to the
    // diversity-only one on mean MASE.
    std::optional<std::size_t> rad_idx;
    std::optional<std::size_t> d_idx;
    for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
        if (report.algorithm_names[a] == "rad") {
            rad_idx = a;
        }
        if (report.algorithm_names[a] == "d") {
            d_idx = a;
        }
    }
    if (rad_idx && d_idx) {
        std::optional<double> rad_mean;
        std::optional<double> d_mean;
        for (const auto& cell : report.cells) {
            if (cell.frequency == "overall" && cell.metric == "mase") {
                if (cell.algorithm == "rad") {
                    rad_mean = cell.mean;
                }
                if (cell.algorithm == "d") {
                    d_mean = cell.mean;
                }
            }
        }
        if (rad_mean && d_mean) {
            SoftCheck check;
            check.name = "rad_mase_leq_diversity_only";
            check.lhs = *rad_mean;
            check.rhs = *d_mean;
            check.margin = *d_mean - *rad_mean;
            check.holds = *rad_mean <= *d_mean;
            report.soft_checks.push_back(check);
        }
    }
}

std::vector<std::string> effective_metrics(const RunSpec& spec) {
    if (spec.metrics.empty()) {
        return all_metric_names();
    }
    std::vector<std::string> out;
    for (const auto& name : all_metric_names()) {
        if (std::find(spec.metrics.begin(), spec.metrics.end(), name) != spec.metrics.end()) {
            out.push_back(name);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("run spec: no known metric selected");
    }
    return out;
}

}  // namespace

AggregateReport run_benchmark(const RunSpec& spec) {
    if (spec.algorithms.empty()) {
        throw std::invalid_argument("run spec: need at least one algorithm");
    }
    for (const auto& algo : spec.algorithms) {
        algo.config.validate();
    }

    PreparedBatch batch = prepare_series(spec);
    const std::vector<PreparedSeries>& prepared = batch.series;

    AggregateReport report;
    report.pool_source = spec.pool_source;
    report.interval_level = spec.interval_level;
    report.rejected = std::move(batch.rejected);
    for (const auto& algo : spec.algorithms) {
        report.algorithm_names.push_back(algo.name);
    }
    report.metric_names = effective_metrics(spec);

    std::size_t failures = 0;
    for (const auto& p : prepared) {
        SeriesOutcome outcome = evaluate_series(p, spec.algorithms, spec.interval_level);
        if (outcome.failed) {
            ++failures;
        }
        report.per_series.push_back(std::move(outcome));
    }
    if (failures == prepared.size()) {
        throw std::runtime_error("run_benchmark: every series failed (first error: " +
                                 report.per_series.front().error + ")");
    }

    aggregate(report, report.metric_names);
    return report;
}

ReldivStrata reldiv_stratify(const AggregateReport& report, std::optional<double> cut_low,
                             std::optional<double> cut_high) {
    ReldivStrata out;
    std::vector<double> values;
    for (const auto& s : report.per_series) {
        if (!s.failed && s.reldiv) {
            values.push_back(*s.reldiv);
        } else if (!s.failed) {
            ++out.undefined_reldiv;
        }
    }
    if (cut_low && cut_high) {
        out.cut_low = *cut_low;
        out.cut_high = *cut_high;
    } else if (!values.empty()) {
        out.cut_low = util::quantile(values, 0.25);
        out.cut_high = util::quantile(values, 0.75);
        out.cuts_from_data = true;
    }
    if (!(out.cut_low <= out.cut_high)) {
        throw std::invalid_argument("reldiv_stratify: cut_low must not exceed cut_high");
    }

    out.strata[0].name = "low";
    out.strata[1].name = "moderate";
    out.strata[2].name = "high";

    std::optional<std::size_t> rad_idx, autorad_idx, a_idx;
    for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
        if (report.algorithm_names[a] == "rad") rad_idx = a;
        if (report.algorithm_names[a] == "autorad") autorad_idx = a;
        if (report.algorithm_names[a] == "a") a_idx = a;
    }

    struct Comparison {
        std::string name;
        std::vector<std::size_t> lhs;  // win when any lhs beats rhs
        std::size_t rhs;
    };
    std::vector<Comparison> comparisons;
    if (rad_idx && a_idx) {
        comparisons.push_back({"rad_vs_a", {*rad_idx}, *a_idx});
    }
    if (autorad_idx && a_idx) {
        comparisons.push_back({"autorad_vs_a", {*autorad_idx}, *a_idx});
    }
    if (rad_idx && autorad_idx && a_idx) {
        comparisons.push_back({"rad_or_autorad_vs_a", {*rad_idx, *autorad_idx}, *a_idx});
    }
    for (auto& stratum : out.strata) {
        for (const auto& c : comparisons) {
            stratum.win_rates.push_back({c.name, 0, 0, 0});
        }
    }

    for (const auto& s : report.per_series) {
        if (s.failed || !s.reldiv) {
            continue;
        }
        const double r = *s.reldiv;
        StratumSummary& stratum =
            r < out.cut_low ? out.strata[0] : (r > out.cut_high ? out.strata[2] : out.strata[1]);
        ++stratum.n_series;

        for (std::size_t ci = 0; ci < comparisons.size(); ++ci) {
            const Comparison& c = comparisons[ci];
            StratumWinRate& wr = stratum.win_rates[ci];
            bool all_identical = true;
            for (std::size_t lhs : c.lhs) {
                if (s.per_algorithm[lhs].selection.kept != s.per_algorithm[c.rhs].selection.kept) {
                    all_identical = false;
                    break;
                }
            }
            if (all_identical) {
                ++wr.excluded_identical;
                continue;
            }
            const auto rhs_mase = s.per_algorithm[c.rhs].report.mase;
            if (!rhs_mase) {
                continue;
            }
            bool win = false;
            bool any_defined = false;
            for (std::size_t lhs : c.lhs) {
                const auto lhs_mase = s.per_algorithm[lhs].report.mase;
                if (lhs_mase) {
                    any_defined = true;
                    if (*lhs_mase < *rhs_mase) {
                        win = true;
                    }
                }
            }
            if (!any_defined) {
                continue;
            }
            ++wr.comparisons;
            if (win) {
                ++wr.wins;
            }
        }
    }
    return out;
}

SweepTable delta_sweep(const RunSpec& spec, std::span<const double> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("delta_sweep: empty grid");
    }
    if (spec.algorithms.empty()) {
        throw std::invalid_argument("run spec: need at least one algorithm");
    }
    const PreparedBatch batch = prepare_series(spec);
    const std::vector<PreparedSeries>& prepared = batch.series;

    SweepTable table;
    table.grid.assign(grid.begin(), grid.end());

    auto depends_on_delta = [](const AlgorithmSpec& a) {
        return a.config.algorithm != trimming::Algorithm::none &&
               a.config.algorithm != trimming::Algorithm::robust_only;
    };

    // Delta-free rows are computed once on the first pass and replicated.
    std::map<std::string, std::vector<SweepRow>> fixed_rows;

    for (std::size_t gi = 0; gi < table.grid.size(); ++gi) {
        const double delta = table.grid[gi];
        std::vector<AlgorithmSpec> algorithms;
        for (const AlgorithmSpec& a : spec.algorithms) {
            if (!depends_on_delta(a) && gi > 0) {
                continue;  // replicated below
            }
            AlgorithmSpec adjusted = a;
            if (depends_on_delta(a)) {
                adjusted.config.delta = delta;
            }
            algorithms.push_back(std::move(adjusted));
        }

        std::vector<SeriesOutcome> outcomes;
        outcomes.reserve(prepared.size());
        for (const auto& p : prepared) {
            outcomes.push_back(evaluate_series(p, algorithms, spec.interval_level));
        }

        std::vector<std::string> groups = frequencies_present(outcomes);
        groups.emplace_back("overall");
        for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
            for (const auto& freq : groups) {
                SweepRow row;
                row.delta = delta;
                row.algorithm = algorithms[ai].name;
                row.frequency = freq;
                double sum = 0.0;
                for (const auto& o : outcomes) {
                    if (o.failed) {
                        continue;
                    }
                    if (freq != "overall" && to_string(o.frequency) != freq) {
                        continue;
                    }
                    if (o.per_algorithm[ai].report.mase) {
                        sum += *o.per_algorithm[ai].report.mase;
                        ++row.n;
                    }
                }
                if (row.n > 0) {
                    row.mean_mase = sum / static_cast<double>(row.n);
                }
                if (!depends_on_delta(algorithms[ai])) {
                    fixed_rows[algorithms[ai].name].push_back(row);
                }
                table.rows.push_back(std::move(row));
            }
        }

        if (gi > 0) {
            for (const AlgorithmSpec& a : spec.algorithms) {
                if (depends_on_delta(a)) {
                    continue;
                }
                for (SweepRow row : fixed_rows[a.name]) {
                    row.delta = delta;
                    table.rows.push_back(std::move(row));
                }
            }
        }
    }

    // Stable output order: delta, then algorithm in spec order, then group.
    std::map<std::string, std::size_t> algo_order;
    for (std::size_t i = 0; i < spec.algorithms.size(); ++i) {
        algo_order[spec.algorithms[i].name] = i;
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [&](const SweepRow& x, const SweepRow& y) {
                         if (x.delta != y.delta) return x.delta < y.delta;
                         return algo_order.at(x.algorithm) < algo_order.at(y.algorithm);
                     });
    return table;
}

std::vector<core::SplitSeries> gen_fixture(std::uint64_t seed) {
    struct Plan {
        core::Frequency frequency;
        int periodicity;
        int horizon;
        int train_len;
        int count;
    };
    const Plan plans[] = {
        {core::Frequency::yearly, 1, 6, 24, 4},    {core::Frequency::quarterly, 4, 8, 40, 4},
        {core::Frequency::monthly, 12, 18, 72, 4}, {core::Frequency::weekly, 52, 13, 120, 3},
        {core::Frequency::daily, 7, 14, 56, 3},    {core::Frequency::hourly, 24, 48, 144, 2},
    };

    util::Rng rng(seed);
    std::vector<core::SplitSeries> out;
    int index = 0;
    for (const Plan& plan : plans) {
        for (int k = 0; k < plan.count; ++k) {
            ++index;
            const int total = plan.train_len + 2 * plan.horizon;
            const double level = rng.uniform(50.0, 150.0);
            const double drift_total = rng.uniform(-30.0, 60.0);
            const double slope = drift_total / static_cast<double>(total);
            const double amplitude = plan.periodicity > 1 ? rng.uniform(5.0, 25.0) : 0.0;
            const double phase = rng.uniform(0.0, 6.283185307179586);
            const double ar = rng.uniform(0.2, 0.7);
            const double ma = rng.uniform(-0.3, 0.3);
            const double sigma = rng.uniform(1.0, 5.0);

            std::vector<double> y(static_cast<std::size_t>(total));
            double e_prev = 0.0;
            double eps_prev = 0.0;
            for (int t = 0; t < total; ++t) {
                const double eps = rng.normal(0.0, sigma);
                const double e = ar * e_prev + eps + ma * eps_prev;
                const double seasonal =
                    amplitude * std::sin(6.283185307179586 * static_cast<double>(t) /
                                             static_cast<double>(plan.periodicity) +
                                         phase);
                y[static_cast<std::size_t>(t)] =
                    level + slope * static_cast<double>(t) + seasonal + e;
                e_prev = e;
                eps_prev = eps;
            }

            core::SplitSeries s;
            char id[32];
            std::snprintf(id, sizeof(id), "fx%02d_%s", index,
                          std::string(to_string(plan.frequency)).c_str());
            s.id = id;
            s.frequency = plan.frequency;
            s.periodicity = plan.periodicity;
            s.train.assign(y.begin(), y.begin() + plan.train_len);
            s.valid.assign(y.begin() + plan.train_len, y.begin() + plan.train_len + plan.horizon);
            s.test.assign(y.begin() + plan.train_len + plan.horizon, y.end());
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace radtrim::harness
