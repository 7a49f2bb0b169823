#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "radtrim/combine/combine.hpp"
#include "radtrim/core/errors.hpp"
#include "radtrim/core/io.hpp"
#include "radtrim/harness/benchmark.hpp"
#include "radtrim/harness/report_io.hpp"
#include "radtrim/metrics/criteria.hpp"
#include "radtrim/trimming/trim.hpp"
#include "radtrim/util/json_writer.hpp"
#include "radtrim/util/numfmt.hpp"

namespace {

using namespace radtrim;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitAlignment = 3;
constexpr int kExitConfig = 4;
constexpr int kExitInternal = 5;

struct TrimFlags {
    std::string algorithm = "rad";
    double delta = 0.05;
    double kappa = 1.0;
    std::string kappa_grid;
    int min_subset = 2;
    bool interval_prestep = false;
    bool commit_then_test = false;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) {
            continue;
        }
        try {
            grid.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad grid value '" + token + "'");
        }
    }
    if (grid.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    return grid;
}

trimming::TrimConfig make_config(const TrimFlags& flags) {
    trimming::TrimConfig config;
    const auto algorithm = trimming::algorithm_from_string(flags.algorithm);
    if (!algorithm) {
        throw std::invalid_argument("unknown algorithm '" + flags.algorithm +
                                    "' (expected none, r, a, d, rad, or autorad)");
    }
    config.algorithm = *algorithm;
    config.delta = flags.delta;
    config.kappa = flags.kappa;
    if (!flags.kappa_grid.empty()) {
        config.kappa_grid = parse_grid(flags.kappa_grid);
    }
    config.min_subset = flags.min_subset;
    config.apply_interval_prestep = flags.interval_prestep;
    config.commit_then_test = flags.commit_then_test;
    config.validate();
    return config;
}

void add_trim_flags(CLI::App* cmd, TrimFlags& flags) {
    cmd->add_option("--algorithm", flags.algorithm,
                    "Trimming algorithm: none, r, a, d, rad, autorad");
    cmd->add_option("--delta", flags.delta, "Level parameter (minimum relative reduction)");
    cmd->add_option("--kappa", flags.kappa, "Diversity scale factor in [0,1]");
    cmd->add_option("--kappa-grid", flags.kappa_grid,
                    "Comma-separated kappa grid for autorad (default 0,0.1,...,1)");
    cmd->add_option("--min-subset", flags.min_subset, "Smallest subset eliminations may reach");
    cmd->add_flag("--interval-prestep", flags.interval_prestep,
                  "Drop interval outliers before trimming (r, rad, autorad)");
    cmd->add_flag("--commit-then-test", flags.commit_then_test,
                  "Commit each removal before the significance test");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") {
        return std::cout;
    }
    file.open(path);
    if (!file) {
        throw core::ParseError("cannot open output file: " + path);
    }
    return file;
}

const core::SplitSeries& pick_series(const core::Dataset& dataset, const std::string& id) {
    if (dataset.series.empty()) {
        throw core::ParseError("series file holds no admissible series");
    }
    if (id.empty()) {
        if (dataset.series.size() > 1) {
            throw std::invalid_argument(
                "series file holds several series; pick one with --series-id");
        }
        return dataset.series.front();
    }
    for (const auto& s : dataset.series) {
        if (s.id == id) {
            return s;
        }
    }
    throw core::AlignmentError("series id '" + id + "' not found in series file");
}

const core::PoolRecord& pick_pool(const core::PoolSet& pools, const std::string& id) {
    const auto it = pools.find(id);
    if (it == pools.end()) {
        throw core::AlignmentError("no pool for series id '" + id + "'");
    }
    return it->second;
}

void write_selection_csv(const core::SubsetSelection& sel, std::ostream& out) {
    out << "label,status,reason\n";
    for (const auto& k : sel.kept) {
        out << k << ",kept,\n";
    }
    for (const auto& r : sel.removed) {
        out << r.label << ",removed," << core::to_string(r.reason) << '\n';
    }
}

int cmd_trim(const std::string& series_path, const std::string& pool_path,
             const std::string& series_id, const TrimFlags& flags, const std::string& output,
             const std::string& format) {
    const trimming::TrimConfig config = make_config(flags);
    const core::Dataset dataset = core::load_series_file(series_path);
    const core::SplitSeries& series = pick_series(dataset, series_id);
    const core::PoolSet pools = core::load_pool_file(pool_path);
    const core::PoolRecord& record = pick_pool(pools, series.id);

    if (record.points.horizon != series.valid.size()) {
        throw core::AlignmentError(
            "pool horizon " + std::to_string(record.points.horizon) +
            " does not match the validation window length " +
            std::to_string(series.valid.size()) + " of series '" + series.id + "'");
    }
    if (config.apply_interval_prestep && !record.intervals) {
        throw std::invalid_argument("--interval-prestep needs lower/upper bounds in the pool file");
    }

    const core::IntervalPool* intervals = record.intervals ? &*record.intervals : nullptr;
    const core::SubsetSelection selection =
        trimming::trim(record.points, series.valid, config, intervals);

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    if (format == "csv") {
        write_selection_csv(selection, out);
    } else {
        core::write_selection_json(selection, out);
    }
    std::cerr << "kept " << selection.kept.size() << " of " << record.points.size()
              << " forecasters\n";
    return kExitOk;
}

void write_metrics_csv(const std::string& id, const std::string& algorithm,
                       const metrics::MetricReport& report, std::ostream& out) {
    out << "id,algorithm,metric,value\n";
    auto row = [&](const char* name, const std::optional<double>& v) {
        out << id << ',' << algorithm << ',' << name << ','
            << (v ? util::format_double(*v, 12) : std::string()) << '\n';
    };
    row("mase", report.mase);
    row("smape", report.smape);
    row("bias", report.bias);
    row("msis", report.msis);
    row("coverage", report.coverage);
    row("upper_coverage", report.upper_coverage);
    row("spread", report.spread);
}

int cmd_evaluate(const std::string& series_path, const std::string& pools_valid,
                 const std::string& pools_test, const std::string& series_id,
                 const TrimFlags& flags, const std::string& output, const std::string& format) {
    const trimming::TrimConfig config = make_config(flags);

    harness::RunSpec spec;
    spec.dataset_path = series_path;
    spec.algorithms = {{std::string(trimming::to_string(config.algorithm)), config}};
    if (!pools_valid.empty() || !pools_test.empty()) {
        spec.pool_source = harness::PoolSource::ingested;
        spec.pools_valid_path = pools_valid;
        spec.pools_test_path = pools_test;
    }
    spec.jobs = 1;

    const harness::AggregateReport report = harness::run_benchmark(spec);
    const harness::SeriesOutcome* chosen = nullptr;
    for (const auto& s : report.per_series) {
        if (series_id.empty() || s.id == series_id) {
            chosen = &s;
            if (!series_id.empty()) {
                break;
            }
        }
    }
    if (chosen == nullptr || (series_id.empty() && report.per_series.size() > 1)) {
        throw std::invalid_argument(series_id.empty()
                                        ? "series file holds several series; pick one with "
                                          "--series-id"
                                        : "series id '" + series_id + "' not found");
    }
    if (chosen->failed) {
        throw core::AlignmentError("series '" + chosen->id + "' failed: " + chosen->error);
    }

    std::ofstream file;
    std::ostream& out = open_output(output, file);
    const harness::AlgoOutcome& o = chosen->per_algorithm.front();
    if (format == "csv") {
        write_metrics_csv(chosen->id, report.algorithm_names.front(), o.report, out);
        return kExitOk;
    }
    util::JsonWriter w(out, 12);
    w.begin_object();
    w.kv("id", chosen->id);
    w.kv("algorithm", report.algorithm_names.front());
    w.key("reldiv");
    if (chosen->reldiv) {
        w.value(*chosen->reldiv);
    } else {
        w.null();
    }
    w.key("kept").begin_array();
    for (const auto& k : o.selection.kept) {
        w.value(k);
    }
    w.end_array();
    w.key("removed").begin_array();
    for (const auto& r : o.selection.removed) {
        w.begin_object();
        w.kv("label", r.label);
        w.kv("reason", core::to_string(r.reason));
        w.end_object();
    }
    w.end_array();
    if (o.selection.selected_kappa) {
        w.kv("selected_kappa", *o.selection.selected_kappa);
    }
    w.key("metrics").begin_object();
    auto metric = [&](const char* name, const std::optional<double>& v) {
        w.key(name);
        if (v) {
            w.value(*v);
        } else {
            w.null();
        }
    };
    metric("mase", o.report.mase);
    metric("smape", o.report.smape);
    metric("bias", o.report.bias);
    metric("msis", o.report.msis);
    metric("coverage", o.report.coverage);
    metric("upper_coverage", o.report.upper_coverage);
    metric("spread", o.report.spread);
    w.end_object();
    w.end_object();
    out << '\n';
    return kExitOk;
}

harness::RunSpec make_run_spec(const std::string& dataset, const std::string& pools_valid,
                               const std::string& pools_test, const std::string& algorithms,
                               const TrimFlags& flags, int jobs, std::uint64_t seed,
                               const std::string& output_dir, const std::string& metrics) {
    harness::RunSpec spec;
    spec.dataset_path = dataset;
    spec.jobs = jobs;
    spec.seed = seed;
    spec.output_dir = output_dir;
    if (!metrics.empty()) {
        std::stringstream ms(metrics);
        std::string token;
        while (std::getline(ms, token, ',')) {
            if (!token.empty()) {
                spec.metrics.push_back(token);
            }
        }
    }
    if (!pools_valid.empty() || !pools_test.empty()) {
        spec.pool_source = harness::PoolSource::ingested;
        spec.pools_valid_path = pools_valid;
        spec.pools_test_path = pools_test;
    }

    std::stringstream ss(algorithms);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) {
            continue;
        }
        TrimFlags per = flags;
        per.algorithm = token;
        trimming::TrimConfig config = make_config(per);
        // The pre-step belongs to the pipelines that include the robustness
        // step; it never applies to none, a, or d.
        if (config.algorithm == trimming::Algorithm::none ||
            config.algorithm == trimming::Algorithm::accuracy_only ||
            config.algorithm == trimming::Algorithm::diversity_only) {
            config.apply_interval_prestep = false;
        }
        spec.algorithms.push_back({std::string(trimming::to_string(config.algorithm)), config});
    }
    if (spec.algorithms.empty()) {
        throw std::invalid_argument("no algorithms selected");
    }
    return spec;
}

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& writer) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path);
    if (!out) {
        throw core::ParseError("cannot open output file: " + path.string());
    }
    writer(out);
    std::cerr << "wrote " << path.string() << '\n';
}

int cmd_bench(const harness::RunSpec& spec) {
    std::filesystem::create_directories(spec.output_dir);
    std::cerr << "benchmarking " << spec.dataset_path << " with " << spec.algorithms.size()
              << " algorithms\n";
    const harness::AggregateReport report = harness::run_benchmark(spec);
    const harness::ReldivStrata strata =
        harness::reldiv_stratify(report, std::nullopt, std::nullopt);

    write_file(spec.output_dir, "report.json",
               [&](std::ostream& out) { harness::write_report_json(report, &strata, out); });
    write_file(spec.output_dir, "report.csv",
               [&](std::ostream& out) { harness::write_report_csv(report, out); });
    write_file(spec.output_dir, "mcb.csv",
               [&](std::ostream& out) { harness::write_mcb_csv(report, out); });
    write_file(spec.output_dir, "reldiv.csv",
               [&](std::ostream& out) { harness::write_reldiv_csv(report, out); });
    write_file(spec.output_dir, "kept_sizes.csv",
               [&](std::ostream& out) { harness::write_kept_sizes_csv(report, out); });
    for (const auto& check : report.soft_checks) {
        std::cerr << "soft check " << check.name << ": " << (check.holds ? "holds" : "FAILS")
                  << " (margin " << util::format_double(check.margin, 6) << ")\n";
    }
    return kExitOk;
}

int cmd_sweep(const harness::RunSpec& spec, const std::string& grid_text) {
    const std::vector<double> grid = parse_grid(grid_text);
    std::filesystem::create_directories(spec.output_dir);
    const harness::SweepTable table = harness::delta_sweep(spec, grid);
    write_file(spec.output_dir, "sweep.csv",
               [&](std::ostream& out) { harness::write_sweep_csv(table, out); });
    return kExitOk;
}

int cmd_gen_fixture(std::uint64_t seed, const std::string& output, const std::string& format) {
    const std::vector<core::SplitSeries> series = harness::gen_fixture(seed);
    std::ofstream file;
    std::ostream& out = open_output(output, file);
    if (format == "json") {
        core::save_series_json(series, out);
    } else {
        core::save_series_csv(series, out);
    }
    std::cerr << "generated " << series.size() << " series (seed " << seed << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forecast-pool trimming and equal-weight combination toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML config file with [bench]/[sweep] sections mirroring the flags");

    // trim
    auto* trim_cmd = app.add_subcommand("trim", "Select an optimal subset for one series");
    std::string trim_series, trim_pool, trim_id, trim_output, trim_format = "json";
    TrimFlags trim_flags;
    trim_cmd->add_option("--series", trim_series, "Series file (csv/json)")->required();
    trim_cmd->add_option("--pool", trim_pool, "Validation-window pool file (csv/json)")
        ->required();
    trim_cmd->add_option("--series-id", trim_id, "Series id when the file holds several");
    add_trim_flags(trim_cmd, trim_flags);
    trim_cmd->add_option("--output", trim_output, "Output path (default stdout)");
    trim_cmd->add_option("--format", trim_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Single series end-to-end");
    std::string eval_series, eval_pools_valid, eval_pools_test, eval_id, eval_output;
    TrimFlags eval_flags;
    eval_cmd->add_option("--series", eval_series, "Series file (csv/json)")->required();
    eval_cmd->add_option("--pools-valid", eval_pools_valid,
                         "Validation-window pool file (default: native forecasters)");
    eval_cmd->add_option("--pools-test", eval_pools_test, "Test-window pool file");
    eval_cmd->add_option("--series-id", eval_id, "Series id when the file holds several");
    add_trim_flags(eval_cmd, eval_flags);
    eval_cmd->add_option("--output", eval_output, "Output path (default stdout)");
    std::string eval_format = "json";
    eval_cmd->add_option("--format", eval_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Batch benchmark over a dataset");
    std::string bench_dataset, bench_pools_valid, bench_pools_test, bench_output = "out";
    std::string bench_algorithms = "none,r,a,d,rad,autorad";
    TrimFlags bench_flags;
    bench_flags.interval_prestep = true;
    int bench_jobs = 0;
    std::uint64_t bench_seed = 0;
    bench_cmd->add_option("--dataset", bench_dataset, "Series file (csv/json)")->required();
    bench_cmd->add_option("--pools-valid", bench_pools_valid,
                          "Validation-window pool file (default: native forecasters)");
    bench_cmd->add_option("--pools-test", bench_pools_test, "Test-window pool file");
    bench_cmd->add_option("--algorithms", bench_algorithms, "Comma-separated algorithm list");
    add_trim_flags(bench_cmd, bench_flags);
    bench_cmd->add_option("--jobs", bench_jobs, "Worker threads (0 = logical CPUs)");
    bench_cmd->add_option("--seed", bench_seed, "Seed (synthetic generation only)");
    std::string bench_metrics;
    bench_cmd->add_option("--metrics", bench_metrics,
                          "Comma-separated metric subset (default: all)");
    bench_cmd->add_option("--output-dir", bench_output, "Report directory");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Delta-grid sweep of mean MASE");
    std::string sweep_dataset, sweep_pools_valid, sweep_pools_test, sweep_output = "out";
    std::string sweep_algorithms = "none,r,a,d,rad,autorad";
    std::string sweep_grid = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1";
    TrimFlags sweep_flags;
    sweep_flags.interval_prestep = true;
    int sweep_jobs = 0;
    sweep_cmd->add_option("--dataset", sweep_dataset, "Series file (csv/json)")->required();
    sweep_cmd->add_option("--pools-valid", sweep_pools_valid,
                          "Validation-window pool file (default: native forecasters)");
    sweep_cmd->add_option("--pools-test", sweep_pools_test, "Test-window pool file");
    sweep_cmd->add_option("--algorithms", sweep_algorithms, "Comma-separated algorithm list");
    sweep_cmd->add_option("--delta-grid", sweep_grid, "Comma-separated delta values");
    add_trim_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads (0 = logical CPUs)");
    sweep_cmd->add_option("--output-dir", sweep_output, "Report directory");

    // gen-fixture
    auto* gen_cmd = app.add_subcommand("gen-fixture", "Emit the seeded synthetic dataset");
    std::uint64_t gen_seed = 42;
    std::string gen_output, gen_format = "csv";
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--output", gen_output, "Output path (default stdout)");
    gen_cmd->add_option("--format", gen_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (trim_cmd->parsed()) {
            return cmd_trim(trim_series, trim_pool, trim_id, trim_flags, trim_output, trim_format);
        }
        if (eval_cmd->parsed()) {
            return cmd_evaluate(eval_series, eval_pools_valid, eval_pools_test, eval_id,
                                eval_flags, eval_output, eval_format);
        }
        if (bench_cmd->parsed()) {
            const harness::RunSpec spec =
                make_run_spec(bench_dataset, bench_pools_valid, bench_pools_test,
                              bench_algorithms, bench_flags, bench_jobs, bench_seed, bench_output,
                              bench_metrics);
            return cmd_bench(spec);
        }
        if (sweep_cmd->parsed()) {
            const harness::RunSpec spec =
                make_run_spec(sweep_dataset, sweep_pools_valid, sweep_pools_test,
                              sweep_algorithms, sweep_flags, sweep_jobs, 0, sweep_output,
                              std::string());
            return cmd_sweep(spec, sweep_grid);
        }
        if (gen_cmd->parsed()) {
            return cmd_gen_fixture(gen_seed, gen_output, gen_format);
        }
    } catch (const core::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const core::AlignmentError& e) {
        std::cerr << "alignment error: " << e.what() << '\n';
        return kExitAlignment;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
