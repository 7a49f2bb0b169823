#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "radtrim/metrics/criteria.hpp"
#include "radtrim/metrics/evaluation.hpp"
#include "radtrim/util/rng.hpp"
#include "support/oracles.hpp"

using namespace radtrim;
using doctest::Approx;

namespace {

core::ForecastPool make_pool(std::vector<std::vector<double>> points) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels.push_back("m" + std::to_string(i));
    }
    return core::ForecastPool::create(std::move(labels), std::move(points));
}

}  // namespace

TEST_CASE("msec unit values") {
    CHECK(metrics::msec(std::vector<double>{2, 3}, std::vector<double>{2, 3}) == 0.0);
    CHECK(metrics::msec(std::vector<double>{1, 1}, std::vector<double>{3, 3}) == Approx(4.0));
    CHECK(metrics::msec(std::vector<double>{0, 2}, std::vector<double>{2, 0}) == Approx(4.0));
    CHECK_THROWS_AS((void)metrics::msec(std::vector<double>{1}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("msec is symmetric, nonnegative, zero iff equal, relaxed triangle") {
    util::Rng rng(2024);
    for (int round = 0; round < 300; ++round) {
        const std::size_t h = 1 + rng.below(12);
        std::vector<double> a(h), b(h), c(h);
        for (std::size_t i = 0; i < h; ++i) {
            a[i] = rng.uniform(-10, 10);
            b[i] = rng.uniform(-10, 10);
            c[i] = rng.uniform(-10, 10);
        }
        const double ab = metrics::msec(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == metrics::msec(b, a));
        CHECK(metrics::msec(a, a) == 0.0);
        // squared-L2 relaxed triangle inequality
        CHECK(metrics::msec(a, c) <= 2.0 * (ab + metrics::msec(b, c)) + 1e-12);
    }
}

TEST_CASE("pool_criteria matches hand computation") {
    const auto pool = make_pool({{1, 1}, {3, 3}});
    const std::vector<double> actuals = {1, 1};
    const auto c = metrics::pool_criteria(pool, actuals);
    CHECK(c.per_forecaster_mse[0] == Approx(0.0));
    CHECK(c.per_forecaster_mse[1] == Approx(4.0));
    CHECK(c.avg_mse == Approx(2.0));
    CHECK(c.pairwise_msec[0][1] == Approx(4.0));
    CHECK(c.pairwise_msec[1][0] == Approx(4.0));
    CHECK(c.pairwise_msec[0][0] == 0.0);
    CHECK(c.avg_msec == Approx(1.0));
}

TEST_CASE("pool_criteria degenerate pools") {
    SUBCASE("single forecaster") {
        const auto pool = make_pool({{2, 4}});
        const auto c = metrics::pool_criteria(pool, std::vector<double>{1, 1});
        CHECK(c.avg_msec == 0.0);
        CHECK(c.avg_mse == Approx((1.0 + 9.0) / 2.0));
    }
    SUBCASE("identical forecasters") {
        const auto pool = make_pool({{2, 2}, {2, 2}, {2, 2}});
        const auto c = metrics::pool_criteria(pool, std::vector<double>{0, 0});
        CHECK(c.avg_msec == 0.0);
    }
}

TEST_CASE("adt unit values and domain") {
    metrics::PoolCriteria criteria;
    criteria.avg_mse = 2.0;
    criteria.avg_msec = 1.0;
    CHECK(metrics::adt(criteria, 1.0) == Approx(1.0));
    CHECK(metrics::adt(criteria, 0.0) == Approx(2.0));
    CHECK(metrics::adt(criteria, 0.5) == Approx(1.5));
    CHECK_THROWS_AS((void)metrics::adt(criteria, 1.2), std::invalid_argument);
    CHECK_THROWS_AS((void)metrics::adt(criteria, -0.1), std::invalid_argument);
}

TEST_CASE("adt at kappa=1 equals the equal-weight combined MSE") {
    // The hand example: pool {(1,1),(3,3)} vs y=(1,1) combines to (2,2).
    const auto pool = make_pool({{1, 1}, {3, 3}});
    const std::vector<double> actuals = {1, 1};
    const auto c = metrics::pool_criteria(pool, actuals);
    CHECK(metrics::adt(c, 1.0) == Approx(oracle::mse({2, 2}, actuals)));
}

TEST_CASE("reldiv unit values") {
    metrics::PoolCriteria criteria;
    criteria.avg_mse = 2.0;
    criteria.avg_msec = 1.0;
    CHECK(*metrics::reldiv(criteria) == Approx(0.5));

    SUBCASE("identical forecasters give zero") {
        const auto pool = make_pool({{5, 5}, {5, 5}});
        const auto c = metrics::pool_criteria(pool, std::vector<double>{1, 1});
        CHECK(*metrics::reldiv(c) == 0.0);
    }
    SUBCASE("perfect identical pool is undefined") {
        const auto pool = make_pool({{1, 1}, {1, 1}});
        const auto c = metrics::pool_criteria(pool, std::vector<double>{1, 1});
        CHECK(!metrics::reldiv(c).has_value());
    }
}

TEST_CASE("decomposition identity on random pools with simplex weights") {
    util::Rng rng(4242);
    for (int round = 0; round < 300; ++round) {
        const auto rp = oracle::random_pool(rng, 2, 10, 1, 20);
        const auto weights = oracle::random_simplex_weights(rng, rp.pool.size());
        const double lhs = oracle::mse(oracle::combine(rp.pool.points, weights), rp.actuals);
        const double rhs = oracle::decomposition_rhs(rp.pool.points, weights, rp.actuals);
        CHECK(lhs == Approx(rhs).epsilon(1e-9));

        // equal weights reduce to adt at kappa = 1
        const std::vector<double> equal(rp.pool.size(), 1.0 / static_cast<double>(rp.pool.size()));
        const auto criteria = metrics::pool_criteria(rp.pool, rp.actuals);
        CHECK(oracle::mse(oracle::combine(rp.pool.points, equal), rp.actuals) ==
              Approx(metrics::adt(criteria, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("adt is affine decreasing in kappa; criteria are translation and scale covariant") {
    util::Rng rng(555);
    for (int round = 0; round < 100; ++round) {
        const auto rp = oracle::random_pool(rng, 2, 8, 2, 12);
        const auto c = metrics::pool_criteria(rp.pool, rp.actuals);
        if (c.avg_msec > 0.0) {
            CHECK(metrics::adt(c, 0.2) > metrics::adt(c, 0.8));
            const double lhs = metrics::adt(c, 0.0) - metrics::adt(c, 0.5);
            const double rhs = metrics::adt(c, 0.5) - metrics::adt(c, 1.0);
            CHECK(lhs == Approx(rhs).epsilon(1e-9));
        }

        const double shift = rng.uniform(-50, 50);
        const double scale = rng.uniform(0.1, 10.0);
        core::ForecastPool shifted = rp.pool;
        std::vector<double> shifted_actuals = rp.actuals;
        for (auto& row : shifted.points) {
            for (double& v : row) {
                v = scale * v + shift;
            }
        }
        for (double& v : shifted_actuals) {
            v = scale * v + shift;
        }
        const auto c2 = metrics::pool_criteria(shifted, shifted_actuals);
        CHECK(c2.avg_mse == Approx(scale * scale * c.avg_mse).epsilon(1e-9));
        CHECK(c2.avg_msec == Approx(scale * scale * c.avg_msec).epsilon(1e-9));
        // reldiv is invariant under the joint affine map
        const auto r1 = metrics::reldiv(c);
        const auto r2 = metrics::reldiv(c2);
        if (r1 && r2) {
            CHECK(*r1 == Approx(*r2).epsilon(1e-9));
        }
    }
}

TEST_CASE("mase unit values") {
    SUBCASE("perfect forecast") {
        const std::vector<double> insample = {1, 2, 3, 5};
        CHECK(*metrics::mase(std::vector<double>{4, 4}, std::vector<double>{4, 4}, insample, 1) ==
              0.0);
    }
    SUBCASE("hand computation") {
        const auto v = metrics::mase(std::vector<double>{3}, std::vector<double>{5},
                                     std::vector<double>{1, 2, 3}, 1);
        CHECK(*v == Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("constant in-sample is undefined") {
        const auto v = metrics::mase(std::vector<double>{3}, std::vector<double>{5},
                                     std::vector<double>{2, 2, 2}, 1);
        CHECK(!v.has_value());
    }
}

TEST_CASE("smape unit values and zero convention") {
    CHECK(metrics::smape(std::vector<double>{4, 4}, std::vector<double>{4, 4}) == 0.0);
    CHECK(metrics::smape(std::vector<double>{1}, std::vector<double>{3}) ==
          Approx(100.0).epsilon(1e-12));
    std::size_t zeros = 0;
    CHECK(metrics::smape(std::vector<double>{0}, std::vector<double>{0}, &zeros) == 0.0);
    CHECK(zeros == 1);
}

TEST_CASE("bias unit values") {
    const std::vector<double> insample = {2, 2, 2, 2};
    SUBCASE("perfect forecast") {
        CHECK(*metrics::bias(std::vector<double>{4, 4}, std::vector<double>{4, 4}, insample) ==
              0.0);
    }
    SUBCASE("undershooting forecast is positive") {
        CHECK(*metrics::bias(std::vector<double>{4, 4}, std::vector<double>{2, 2}, insample) ==
              Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("overshooting forecast is negative") {
        CHECK(*metrics::bias(std::vector<double>{4, 4}, std::vector<double>{6, 6}, insample) <
              0.0);
    }
    SUBCASE("zero in-sample mean is undefined") {
        CHECK(!metrics::bias(std::vector<double>{1}, std::vector<double>{2},
                             std::vector<double>{-1, 1})
                   .has_value());
    }
}

TEST_CASE("msis unit values") {
    const std::vector<double> insample = {1, 2, 3};  // seasonal-naive MAE = 1 at s=1
    SUBCASE("inside the interval everywhere gives the mean width") {
        const auto v = metrics::msis(std::vector<double>{2, 2}, std::vector<double>{1, 1},
                                     std::vector<double>{4, 5}, insample, 1, 0.05);
        CHECK(*v == Approx(3.5).epsilon(1e-12));
    }
    SUBCASE("hand-computed penalty") {
        const auto v = metrics::msis(std::vector<double>{10}, std::vector<double>{0},
                                     std::vector<double>{5}, insample, 1, 0.05);
        CHECK(*v == Approx(205.0).epsilon(1e-12));
    }
    SUBCASE("degenerate interval at the actual") {
        const auto v = metrics::msis(std::vector<double>{7}, std::vector<double>{7},
                                     std::vector<double>{7}, insample, 1, 0.05);
        CHECK(*v == 0.0);
    }
}

TEST_CASE("coverage_stats unit values") {
    SUBCASE("all inside") {
        const auto [cov, ucov] = metrics::coverage_stats(
            std::vector<double>{1, 2}, std::vector<double>{0, 0}, std::vector<double>{3, 3});
        CHECK(cov == 1.0);
        CHECK(ucov == 1.0);
    }
    SUBCASE("hand count") {
        const auto [cov, ucov] = metrics::coverage_stats(
            std::vector<double>{1, 10}, std::vector<double>{0, 0}, std::vector<double>{5, 5});
        CHECK(cov == Approx(0.5));
        CHECK(ucov == Approx(0.5));
    }
    SUBCASE("below the lower bound everywhere") {
        const auto [cov, ucov] = metrics::coverage_stats(
            std::vector<double>{-5, -5}, std::vector<double>{0, 0}, std::vector<double>{5, 5});
        CHECK(cov == 0.0);
        CHECK(ucov == 1.0);
    }
}

TEST_CASE("spread unit values") {
    const std::vector<double> insample = {2, 2};
    CHECK(*metrics::spread(std::vector<double>{1, 1}, std::vector<double>{1, 1}, insample) == 0.0);
    CHECK(*metrics::spread(std::vector<double>{0, 0}, std::vector<double>{2, 2}, insample) ==
          Approx(1.0).epsilon(1e-12));
    // doubling widths doubles spread
    CHECK(*metrics::spread(std::vector<double>{0, 0}, std::vector<double>{4, 4}, insample) ==
          Approx(2.0).epsilon(1e-12));
}

TEST_CASE("upper coverage never falls below coverage (random)") {
    util::Rng rng(777);
    for (int round = 0; round < 200; ++round) {
        const std::size_t h = 1 + rng.below(10);
        std::vector<double> y(h), lo(h), up(h);
        for (std::size_t i = 0; i < h; ++i) {
            y[i] = rng.uniform(-10, 10);
            lo[i] = rng.uniform(-10, 10);
            up[i] = rng.uniform(-10, 10);
        }
        const auto [cov, ucov] = metrics::coverage_stats(y, lo, up);
        CHECK(ucov >= cov);
    }
}

TEST_CASE("metric implementations agree with straight-loop oracles on random inputs") {
    util::Rng rng(31337);
    for (int round = 0; round < 200; ++round) {
        const std::size_t h = 1 + rng.below(12);
        const std::size_t t_len = h + 2 + rng.below(30);
        const int s = 1 + static_cast<int>(rng.below(6));
        std::vector<double> y(h), f(h), lo(h), up(h), insample(t_len);
        for (std::size_t i = 0; i < h; ++i) {
            y[i] = rng.uniform(-100, 100);
            f[i] = rng.uniform(-100, 100);
            lo[i] = rng.uniform(-120, 80);
            up[i] = lo[i] + rng.uniform(0.0, 60.0);
        }
        for (double& v : insample) {
            v = rng.uniform(1.0, 100.0);
        }

        // oracle denominators
        const std::size_t lag =
            static_cast<std::size_t>(s) >= t_len ? 1 : static_cast<std::size_t>(s);
        double denom = 0.0;
        for (std::size_t t = lag; t < t_len; ++t) {
            denom += std::fabs(insample[t] - insample[t - lag]);
        }
        denom /= static_cast<double>(t_len - lag);
        double insample_mean = 0.0;
        for (double v : insample) {
            insample_mean += v;
        }
        insample_mean /= static_cast<double>(t_len);

        if (denom > 0.0) {
            double abs_err = 0.0;
            for (std::size_t i = 0; i < h; ++i) {
                abs_err += std::fabs(y[i] - f[i]);
            }
            const double mase_oracle = abs_err / static_cast<double>(h) / denom;
            CHECK(*metrics::mase(y, f, insample, s) == Approx(mase_oracle).epsilon(1e-12));

            double msis_sum = 0.0;
            const double alpha = 0.05;
            for (std::size_t i = 0; i < h; ++i) {
                msis_sum += up[i] - lo[i];
                if (y[i] < lo[i]) {
                    msis_sum += 2.0 / alpha * (lo[i] - y[i]);
                }
                if (y[i] > up[i]) {
                    msis_sum += 2.0 / alpha * (y[i] - up[i]);
                }
            }
            const double msis_oracle = msis_sum / static_cast<double>(h) / denom;
            CHECK(*metrics::msis(y, lo, up, insample, s, alpha) ==
                  Approx(msis_oracle).epsilon(1e-12));
        }

        double smape_sum = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            const double d = std::fabs(y[i]) + std::fabs(f[i]);
            if (d > 0.0) {
                smape_sum += std::fabs(y[i] - f[i]) / d;
            }
        }
        CHECK(metrics::smape(y, f) ==
              Approx(200.0 * smape_sum / static_cast<double>(h)).epsilon(1e-12));

        double err_sum = 0.0;
        double width_sum = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            err_sum += y[i] - f[i];
            width_sum += up[i] - lo[i];
        }
        CHECK(*metrics::bias(y, f, insample) ==
              Approx(err_sum / static_cast<double>(h) / insample_mean).epsilon(1e-12));
        CHECK(*metrics::spread(lo, up, insample) ==
              Approx(width_sum / static_cast<double>(h) / insample_mean).epsilon(1e-12));
    }
}

TEST_CASE("seasonal denominator falls back to one when s exceeds the sample") {
    bool fallback = false;
    const std::vector<double> insample = {1, 3, 2, 5};
    const double with_big_s = metrics::seasonal_naive_mae(insample, 12, &fallback);
    CHECK(fallback);
    bool fallback1 = false;
    CHECK(with_big_s == metrics::seasonal_naive_mae(insample, 1, &fallback1));
    CHECK(!fallback1);
}
