#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "radtrim/core/pool.hpp"
#include "radtrim/core/series.hpp"

namespace radtrim::forecasters {

/// Native pool members: simple benchmarks plus the additive-error,
/// additive-components exponential smoothing subset (level; trend; damped
/// trend; each optionally with additive seasonality).
enum class ModelKind {
    naive,
    snaive,
    rw_drift,
    theta,
    es_ann,
    es_aan,
    es_adn,
    es_ana,
    es_aaa,
    es_ada,
};

std::string_view kind_name(ModelKind kind);
std::optional<ModelKind> kind_from_string(std::string_view name);
bool kind_is_seasonal(ModelKind kind);

/// Whether a kind can be fit on a training segment of the given length.
/// Seasonal kinds need two full cycles and a real cycle (s >= 2).
bool kind_available(ModelKind kind, std::size_t train_len, int s);

struct ModelParams {
    double alpha = 0.0;   // level smoothing, (0, 1]
    double beta = 0.0;    // trend smoothing, [0, alpha]
    double gamma = 0.0;   // seasonal smoothing, [0, 1 - alpha]
    double phi = 1.0;     // damping, [0.8, 0.98] when damped
    double drift = 0.0;   // rw_drift slope / theta half-slope
};

struct ModelState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;  // per-phase indices; snaive: last cycle
};

struct FittedModel {
    ModelKind kind = ModelKind::naive;
    ModelParams params;
    ModelState state;
    double sigma2 = 0.0;      // in-sample one-step residual variance
    int periodicity = 1;
    std::size_t n_obs = 0;
};

/// Fits one kind on a training sequence. Smoothing parameters minimize the
/// in-sample sum of squared one-step errors via a deterministic bounded
/// simplex search; returns nullopt when the series is too short for the
/// kind.
std::optional<FittedModel> fit(std::span<const double> y, ModelKind kind, int s);

/// Replays the one-step recursion of a fitted model over a sample and
/// returns the prediction errors (diagnostics; the fit minimizes their sum
/// of squares).
std::vector<double> one_step_residuals(const FittedModel& model, std::span<const double> y);

struct ForecastResult {
    std::vector<double> points;
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Point forecasts from the state recursions plus Gaussian intervals
/// points +- z * sigma_h with the class-1 additive forecast-variance
/// recursions.
ForecastResult forecast(const FittedModel& model, int horizon, double level);

struct PoolPair {
    core::ForecastPool points;
    core::IntervalPool intervals;
};

struct BuiltPools {
    PoolPair validation;  // models fit on train only
    PoolPair test;        // models refit on train + valid
    std::vector<ModelKind> skipped;
};

/// Builds validation- and test-window pools for a series. Kinds too short
/// to fit on the training segment are skipped consistently in both windows.
/// Throws std::runtime_error when no kind is available.
BuiltPools build_pool(const core::SplitSeries& series, std::span<const ModelKind> kinds,
                      double interval_level = 0.95);

/// The shipped pool composition: six non-seasonal kinds for s = 1, all ten
/// kinds otherwise.
std::vector<ModelKind> default_kinds(int s);

}  // namespace radtrim::forecasters
