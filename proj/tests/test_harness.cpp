#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "radtrim/combine/combine.hpp"
#include "radtrim/core/io.hpp"
#include "radtrim/forecasters/models.hpp"
#include "radtrim/harness/benchmark.hpp"
#include "radtrim/harness/report_io.hpp"
#include "radtrim/metrics/evaluation.hpp"
#include "radtrim/util/rng.hpp"
#include "support/oracles.hpp"

using namespace radtrim;
using doctest::Approx;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

/// Three fast synthetic series (two yearly, one quarterly).
std::vector<core::SplitSeries> small_dataset() {
    util::Rng rng(100);
    std::vector<core::SplitSeries> out;
    for (int i = 0; i < 3; ++i) {
        core::SplitSeries s;
        s.id = "small_" + std::to_string(i);
        s.periodicity = i == 2 ? 4 : 1;
        s.frequency = i == 2 ? core::Frequency::quarterly : core::Frequency::yearly;
        const int train_len = i == 2 ? 32 : 18;
        const int h = i == 2 ? 8 : 6;
        for (int t = 0; t < train_len; ++t) {
            s.train.push_back(60.0 + 0.7 * t +
                              (s.periodicity > 1 ? 9.0 * std::sin(t * 3.14159 / 2.0) : 0.0) +
                              rng.normal(0.0, 2.0));
        }
        for (int t = 0; t < h; ++t) {
            s.valid.push_back(60.0 + 0.7 * (train_len + t) + rng.normal(0.0, 2.0));
            s.test.push_back(60.0 + 0.7 * (train_len + h + t) + rng.normal(0.0, 2.0));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string write_dataset(const std::vector<core::SplitSeries>& series,
                          const std::string& name) {
    const auto path = temp_file(name);
    std::ofstream out(path);
    core::save_series_csv(series, out);
    return path.string();
}

std::string render_report(const harness::AggregateReport& report) {
    std::stringstream ss;
    harness::write_report_json(report, nullptr, ss);
    return ss.str();
}

}  // namespace

TEST_CASE("mcb_test ties, dominance, and the sign-test fixture") {
    SUBCASE("full ties give equal mean ranks with overlapping intervals") {
        std::vector<std::vector<std::optional<double>>> scores(
            3, std::vector<std::optional<double>>(10, 1.0));
        const auto result = harness::mcb_test(scores, {"x", "y", "z"}, 0.05);
        for (const auto& e : result.entries) {
            CHECK(e.mean_rank == Approx(2.0));
        }
        CHECK(!harness::mcb_significant(result.entries[0], result.entries[1]));
    }

    SUBCASE("an algorithm that always wins ranks first") {
        std::vector<std::vector<std::optional<double>>> scores(3);
        for (int n = 0; n < 12; ++n) {
            scores[0].push_back(1.0);
            scores[1].push_back(2.0 + n);
            scores[2].push_back(3.0 + n);
        }
        const auto result = harness::mcb_test(scores, {"best", "mid", "worst"}, 0.05);
        CHECK(result.entries[0].mean_rank == Approx(1.0));
        CHECK(result.entries[2].mean_rank == Approx(3.0));
    }

    SUBCASE("K=2, N=100 dominance fixture agrees with the sign test") {
        std::vector<std::vector<std::optional<double>>> scores(2);
        for (int n = 0; n < 100; ++n) {
            const bool a_wins = n < 95;
            scores[0].push_back(a_wins ? 1.0 : 2.0);
            scores[1].push_back(a_wins ? 2.0 : 1.0);
        }
        const auto result = harness::mcb_test(scores, {"a", "b"}, 0.05);
        CHECK(result.entries[0].mean_rank == Approx(1.05));
        CHECK(result.entries[1].mean_rank == Approx(1.95));
        const bool mcb_verdict = harness::mcb_significant(result.entries[0], result.entries[1]);
        const bool sign_verdict = oracle::sign_test_p(95, 100) < 0.05;
        CHECK(mcb_verdict == sign_verdict);
        CHECK(mcb_verdict);
    }

    SUBCASE("series with undefined scores are dropped with a count") {
        std::vector<std::vector<std::optional<double>>> scores(2);
        scores[0] = {1.0, std::nullopt, 1.0, 1.0};
        scores[1] = {2.0, 2.0, 2.0, std::nullopt};
        const auto result = harness::mcb_test(scores, {"a", "b"}, 0.05);
        CHECK(result.n_used == 2);
        CHECK(result.n_dropped == 2);
    }

    SUBCASE("mean ranks sum to K(K+1)/2 without drops") {
        util::Rng rng(808);
        std::vector<std::vector<std::optional<double>>> scores(
            5, std::vector<std::optional<double>>(30));
        for (auto& row : scores) {
            for (auto& v : row) {
                v = rng.uniform(0.0, 10.0);
            }
        }
        const auto result = harness::mcb_test(scores, {"a", "b", "c", "d", "e"}, 0.05);
        double sum = 0.0;
        for (const auto& e : result.entries) {
            CHECK(e.mean_rank >= 1.0);
            CHECK(e.mean_rank <= 5.0);
            sum += e.mean_rank;
        }
        CHECK(sum == Approx(15.0));
    }

    SUBCASE("only the bundled alpha and K range are supported") {
        std::vector<std::vector<std::optional<double>>> scores(
            2, std::vector<std::optional<double>>(5, 1.0));
        CHECK_THROWS_AS((void)harness::mcb_test(scores, {"a", "b"}, 0.01),
                        std::invalid_argument);
    }
}

TEST_CASE("reldiv_stratify buckets, exclusions, and default cuts") {
    harness::AggregateReport report;
    report.algorithm_names = {"a", "rad", "autorad"};

    auto add_series = [&](const std::string& id, double reldiv, double mase_a, double mase_rad,
                          double mase_autorad, bool identical_subsets) {
        harness::SeriesOutcome s;
        s.id = id;
        s.frequency = core::Frequency::yearly;
        s.reldiv = reldiv;
        harness::AlgoOutcome a_out, rad_out, autorad_out;
        a_out.selection.kept = {"m0", "m1"};
        rad_out.selection.kept = identical_subsets ? std::vector<std::string>{"m0", "m1"}
                                                   : std::vector<std::string>{"m0"};
        autorad_out.selection.kept = rad_out.selection.kept;
        a_out.report.mase = mase_a;
        rad_out.report.mase = mase_rad;
        autorad_out.report.mase = mase_autorad;
        s.per_algorithm = {a_out, rad_out, autorad_out};
        report.per_series.push_back(std::move(s));
    };

    // low stratum: 2 series; moderate: 2 (one excluded for identical subsets);
    // high: 1 where rad wins
    add_series("s1", 0.10, 1.0, 1.2, 1.3, false);
    add_series("s2", 0.15, 1.0, 0.9, 1.1, false);
    add_series("s3", 0.30, 1.0, 1.0, 1.0, true);
    add_series("s4", 0.40, 2.0, 1.5, 1.6, false);
    add_series("s5", 0.80, 3.0, 1.0, 2.0, false);

    const auto strata = harness::reldiv_stratify(report, 0.23, 0.53);
    CHECK(strata.strata[0].n_series == 2);
    CHECK(strata.strata[1].n_series == 2);
    CHECK(strata.strata[2].n_series == 1);

    const auto& moderate = strata.strata[1];
    REQUIRE(moderate.win_rates.size() == 3);
    CHECK(moderate.win_rates[0].comparison == "rad_vs_a");
    CHECK(moderate.win_rates[0].excluded_identical == 1);
    CHECK(moderate.win_rates[0].comparisons == 1);
    CHECK(moderate.win_rates[0].wins == 1);

    const auto& high = strata.strata[2];
    CHECK(high.win_rates[0].wins == 1);
    CHECK(high.win_rates[2].comparison == "rad_or_autorad_vs_a");
    CHECK(high.win_rates[2].wins == 1);

    SUBCASE("default cuts come from the data quartiles") {
        const auto auto_cuts = harness::reldiv_stratify(report, std::nullopt, std::nullopt);
        CHECK(auto_cuts.cuts_from_data);
        CHECK(auto_cuts.cut_low == Approx(oracle::quantile({0.1, 0.15, 0.3, 0.4, 0.8}, 0.25)));
        CHECK(auto_cuts.cut_high == Approx(oracle::quantile({0.1, 0.15, 0.3, 0.4, 0.8}, 0.75)));
    }

    SUBCASE("an empty stratum reports zero without crashing") {
        const auto wide = harness::reldiv_stratify(report, 0.01, 0.99);
        CHECK(wide.strata[0].n_series == 0);
    }
}

TEST_CASE("run_benchmark on one series equals its direct metric report") {
    auto dataset = small_dataset();
    dataset.resize(1);
    const std::string path = write_dataset(dataset, "radtrim_single.csv");

    harness::RunSpec spec;
    spec.dataset_path = path;
    spec.jobs = 1;
    trimming::TrimConfig none;
    none.algorithm = trimming::Algorithm::none;
    spec.algorithms = {{"none", none}};

    const auto report = harness::run_benchmark(spec);
    REQUIRE(report.per_series.size() == 1);
    const auto& outcome = report.per_series[0];
    REQUIRE(!outcome.failed);

    // direct recomputation: equal-weight combination of the full test pool
    const auto pools =
        forecasters::build_pool(dataset[0], forecasters::default_kinds(dataset[0].periodicity));
    const auto combined = combine::combine_equal(pools.test.points, pools.test.points.labels,
                                                 &pools.test.intervals);
    const auto direct = metrics::score_test_window(dataset[0], combined.points,
                                                   &*combined.lower, &*combined.upper, 0.95);
    CHECK(*outcome.per_algorithm[0].report.mase == Approx(*direct.mase));
    CHECK(*outcome.per_algorithm[0].report.msis == Approx(*direct.msis));

    // aggregation over one series is that series
    for (const auto& cell : report.cells) {
        if (cell.metric == "mase") {
            CHECK(*cell.mean == Approx(*direct.mase));
            CHECK(cell.n == 1);
        }
    }
}

TEST_CASE("identical algorithm configs give identical aggregate rows") {
    const std::string path = write_dataset(small_dataset(), "radtrim_twin.csv");
    harness::RunSpec spec;
    spec.dataset_path = path;
    spec.jobs = 1;
    trimming::TrimConfig rad;
    rad.algorithm = trimming::Algorithm::rad;
    spec.algorithms = {{"one", rad}, {"two", rad}};

    const auto report = harness::run_benchmark(spec);
    std::map<std::string, double> one, two;
    for (const auto& cell : report.cells) {
        if (!cell.mean) {
            continue;
        }
        if (cell.algorithm == "one") {
            one[cell.frequency + cell.metric] = *cell.mean;
        } else {
            two[cell.frequency + cell.metric] = *cell.mean;
        }
    }
    CHECK(one == two);
}

TEST_CASE("aggregates are invariant to series order and worker count") {
    auto dataset = small_dataset();
    const std::string forward = write_dataset(dataset, "radtrim_fwd.csv");
    std::reverse(dataset.begin(), dataset.end());
    const std::string reversed = write_dataset(dataset, "radtrim_rev.csv");

    harness::RunSpec spec;
    spec.dataset_path = forward;
    spec.jobs = 1;
    spec.algorithms = harness::default_algorithms();

    harness::RunSpec spec_rev = spec;
    spec_rev.dataset_path = reversed;
    spec_rev.jobs = 3;

    const auto a = harness::run_benchmark(spec);
    const auto b = harness::run_benchmark(spec_rev);
    CHECK(render_report(a) == render_report(b));
}

TEST_CASE("delta_sweep replicates the delta-free rows and matches bench at one point") {
    const std::string path = write_dataset(small_dataset(), "radtrim_sweep.csv");
    harness::RunSpec spec;
    spec.dataset_path = path;
    spec.jobs = 1;
    spec.algorithms = harness::default_algorithms(0.05);

    SUBCASE("singleton grid equals the plain benchmark") {
        const std::vector<double> grid = {0.05};
        const auto table = harness::delta_sweep(spec, grid);
        const auto report = harness::run_benchmark(spec);
        for (const auto& row : table.rows) {
            for (const auto& cell : report.cells) {
                if (cell.metric == "mase" && cell.algorithm == row.algorithm &&
                    cell.frequency == row.frequency) {
                    REQUIRE(row.mean_mase.has_value() == cell.mean.has_value());
                    if (row.mean_mase) {
                        CHECK(*row.mean_mase == Approx(*cell.mean).epsilon(1e-12));
                    }
                }
            }
        }
    }

    SUBCASE("none and r rows do not vary with delta") {
        const std::vector<double> grid = {0.0, 0.1};
        const auto table = harness::delta_sweep(spec, grid);
        std::map<std::string, std::vector<double>> by_algo;
        for (const auto& row : table.rows) {
            if ((row.algorithm == "none" || row.algorithm == "r") && row.mean_mase) {
                by_algo[row.algorithm + "/" + row.frequency].push_back(*row.mean_mase);
            }
        }
        for (const auto& [key, values] : by_algo) {
            REQUIRE(values.size() == 2);
            CHECK(values[0] == values[1]);
        }
    }
}

TEST_CASE("ingested pools reproduce the native-forecaster run") {
    const auto dataset = small_dataset();
    const std::string path = write_dataset(dataset, "radtrim_ingest.csv");

    // export the native pools for both windows
    core::PoolSet valid_pools, test_pools;
    for (const auto& s : dataset) {
        const auto built =
            forecasters::build_pool(s, forecasters::default_kinds(s.periodicity));
        valid_pools.emplace(
            s.id, core::PoolRecord{built.validation.points, built.validation.intervals});
        test_pools.emplace(s.id, core::PoolRecord{built.test.points, built.test.intervals});
    }
    const auto vpath = temp_file("radtrim_ingest_valid.csv");
    const auto tpath = temp_file("radtrim_ingest_test.csv");
    {
        std::ofstream out(vpath);
        core::save_pool_csv(valid_pools, out);
    }
    {
        std::ofstream out(tpath);
        core::save_pool_csv(test_pools, out);
    }

    harness::RunSpec native;
    native.dataset_path = path;
    native.jobs = 1;
    native.algorithms = harness::default_algorithms();

    harness::RunSpec ingested = native;
    ingested.pool_source = harness::PoolSource::ingested;
    ingested.pools_valid_path = vpath.string();
    ingested.pools_test_path = tpath.string();

    const auto a = harness::run_benchmark(native);
    const auto b = harness::run_benchmark(ingested);
    // identical except the pool_source metadata line
    std::string rendered_b = render_report(b);
    const std::string tag = "\"pool_source\": \"ingested\"";
    rendered_b.replace(rendered_b.find(tag), tag.size(),
                       "\"pool_source\": \"native_forecasters\"");
    CHECK(render_report(a) == rendered_b);
}

TEST_CASE("a missing ingested pool is a recorded per-series failure") {
    const auto dataset = small_dataset();
    const std::string path = write_dataset(dataset, "radtrim_ingest_miss.csv");

    core::PoolSet pools;
    const auto built =
        forecasters::build_pool(dataset[0], forecasters::default_kinds(dataset[0].periodicity));
    pools.emplace(dataset[0].id,
                  core::PoolRecord{built.validation.points, built.validation.intervals});
    const auto vpath = temp_file("radtrim_ingest_miss_valid.csv");
    {
        std::ofstream out(vpath);
        core::save_pool_csv(pools, out);
    }
    core::PoolSet tpools;
    tpools.emplace(dataset[0].id,
                   core::PoolRecord{built.test.points, built.test.intervals});
    const auto tpath = temp_file("radtrim_ingest_miss_test.csv");
    {
        std::ofstream out(tpath);
        core::save_pool_csv(tpools, out);
    }

    harness::RunSpec spec;
    spec.dataset_path = path;
    spec.jobs = 1;
    spec.pool_source = harness::PoolSource::ingested;
    spec.pools_valid_path = vpath.string();
    spec.pools_test_path = tpath.string();
    trimming::TrimConfig none;
    none.algorithm = trimming::Algorithm::none;
    spec.algorithms = {{"none", none}};

    const auto report = harness::run_benchmark(spec);
    std::size_t failed = 0;
    for (const auto& s : report.per_series) {
        if (s.failed) {
            ++failed;
        }
    }
    CHECK(failed == 2);  // only the first series has pools
}

TEST_CASE("the metric toggle restricts aggregation") {
    const std::string path = write_dataset(small_dataset(), "radtrim_toggle.csv");
    harness::RunSpec spec;
    spec.dataset_path = path;
    spec.jobs = 1;
    spec.algorithms = harness::default_algorithms();
    spec.metrics = {"mase"};
    const auto report = harness::run_benchmark(spec);
    CHECK(report.metric_names == std::vector<std::string>{"mase"});
    for (const auto& cell : report.cells) {
        CHECK(cell.metric == "mase");
    }
    for (const auto& panel : report.mcb) {
        CHECK(panel.metric == "mase");
    }

    spec.metrics = {"no_such_metric"};
    CHECK_THROWS_AS((void)harness::run_benchmark(spec), std::invalid_argument);
}

TEST_CASE("gen_fixture is deterministic and spans the six frequencies") {
    const auto a = harness::gen_fixture(42);
    const auto b = harness::gen_fixture(42);
    const auto c = harness::gen_fixture(43);
    REQUIRE(a.size() == 20);
    CHECK(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].train == b[i].train);
        CHECK(a[i].valid == b[i].valid);
        CHECK(a[i].test == b[i].test);
    }
    CHECK(a[0].train != c[0].train);

    std::set<core::Frequency> seen;
    for (const auto& s : a) {
        seen.insert(s.frequency);
    }
    CHECK(seen.size() == 6);

    // every generated series passes the admission rules
    for (const auto& s : a) {
        std::vector<double> obs = s.train;
        obs.insert(obs.end(), s.valid.begin(), s.valid.end());
        obs.insert(obs.end(), s.test.begin(), s.test.end());
        CHECK(core::validate_series(s.id, obs, s.valid.size(), s.test.size(), s.periodicity,
                                    s.frequency)
                  .ok());
    }
}

TEST_CASE("the shipped fixture file reproduces gen_fixture(42) exactly") {
    const auto generated = harness::gen_fixture(42);
    std::stringstream expected;
    core::save_series_csv(generated, expected);

    std::ifstream shipped(std::string(RADTRIM_FIXTURE_DIR) + "/series.csv");
    REQUIRE(shipped.good());
    std::stringstream actual;
    actual << shipped.rdbuf();
    CHECK(expected.str() == actual.str());
}

TEST_CASE("bench on the shipped fixture matches the golden report byte for byte") {
    harness::RunSpec spec;
    spec.dataset_path = std::string(RADTRIM_FIXTURE_DIR) + "/series.csv";
    spec.jobs = 1;
    spec.algorithms = harness::default_algorithms();

    const auto report = harness::run_benchmark(spec);
    const auto strata = harness::reldiv_stratify(report, std::nullopt, std::nullopt);
    std::stringstream rendered;
    harness::write_report_json(report, &strata, rendered);

    // a second run is byte-identical
    const auto report2 = harness::run_benchmark(spec);
    const auto strata2 = harness::reldiv_stratify(report2, std::nullopt, std::nullopt);
    std::stringstream rendered2;
    harness::write_report_json(report2, &strata2, rendered2);
    CHECK(rendered.str() == rendered2.str());

    std::ifstream golden_file(std::string(RADTRIM_GOLDEN_DIR) + "/report.json");
    REQUIRE(golden_file.good());
    std::stringstream golden;
    golden << golden_file.rdbuf();
    CHECK(rendered.str() == golden.str());
}
