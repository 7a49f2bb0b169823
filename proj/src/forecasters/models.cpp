#include "radtrim/forecasters/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "radtrim/util/nelder_mead.hpp"
#include "radtrim/util/stats.hpp"

namespace radtrim::forecasters {

std::string_view kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::naive: return "naive";
        case ModelKind::snaive: return "snaive";
        case ModelKind::rw_drift: return "rw_drift";
        case ModelKind::theta: return "theta";
        case ModelKind::es_ann: return "es_ann";
        case ModelKind::es_aan: return "es_aan";
        case ModelKind::es_adn: return "es_adn";
        case ModelKind::es_ana: return "es_ana";
        case ModelKind::es_aaa: return "es_aaa";
        case ModelKind::es_ada: return "es_ada";
    }
    return "unknown";
}

std::optional<ModelKind> kind_from_string(std::string_view name) {
    for (ModelKind kind :
         {ModelKind::naive, ModelKind::snaive, ModelKind::rw_drift, ModelKind::theta,
          ModelKind::es_ann, ModelKind::es_aan, ModelKind::es_adn, ModelKind::es_ana,
          ModelKind::es_aaa, ModelKind::es_ada}) {
        if (kind_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

bool kind_is_seasonal(ModelKind kind) {
    switch (kind) {
        case ModelKind::snaive:
        case ModelKind::es_ana:
        case ModelKind::es_aaa:
        case ModelKind::es_ada: return true;
        default: return false;
    }
}

bool kind_available(ModelKind kind, std::size_t train_len, int s) {
    if (train_len < 2) {
        return false;
    }
    if (kind_is_seasonal(kind)) {
        return s >= 2 && train_len >= 2 * static_cast<std::size_t>(s);
    }
    return true;
}

namespace {

struct EsShape {
    bool trend = false;
    bool damped = false;
    bool seasonal = false;
};

EsShape es_shape(ModelKind kind) {
    switch (kind) {
        case ModelKind::es_ann: return {false, false, false};
        case ModelKind::es_aan: return {true, false, false};
        case ModelKind::es_adn: return {true, true, false};
        case ModelKind::es_ana: return {false, false, true};
        case ModelKind::es_aaa: return {true, false, true};
        case ModelKind::es_ada: return {true, true, true};
        default: throw std::logic_error("es_shape: not an exponential smoothing kind");
    }
}

double ols_slope(std::span<const double> y) {
    const std::size_t n = y.size();
    const double x_mean = (static_cast<double>(n) + 1.0) / 2.0;
    double y_mean = 0.0;
    for (double v : y) {
        y_mean += v;
    }
    y_mean /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dx = static_cast<double>(t + 1) - x_mean;
        sxy += dx * (y[t] - y_mean);
        sxx += dx * dx;
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

double mean_first_difference(std::span<const double> y, std::size_t max_steps) {
    const std::size_t steps = std::min(max_steps, y.size() - 1);
    double sum = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        sum += y[t + 1] - y[t];
    }
    return steps == 0 ? 0.0 : sum / static_cast<double>(steps);
}

/// Per-phase means of the OLS-detrended series, mean-centered.
std::vector<double> initial_seasonal(std::span<const double> y, int s) {
    const std::size_t n = y.size();
    const double b = ols_slope(y);
    double y_mean = 0.0;
    for (double v : y) {
        y_mean += v;
    }
    y_mean /= static_cast<double>(n);
    const double x_mean = (static_cast<double>(n) + 1.0) / 2.0;
    const double a = y_mean - b * x_mean;

    std::vector<double> sums(static_cast<std::size_t>(s), 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(s), 0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t phase = t % static_cast<std::size_t>(s);
        sums[phase] += y[t] - (a + b * static_cast<double>(t + 1));
        ++counts[phase];
    }
    std::vector<double> index(static_cast<std::size_t>(s), 0.0);
    double total = 0.0;
    for (std::size_t p = 0; p < index.size(); ++p) {
        index[p] = counts[p] == 0 ? 0.0 : sums[p] / static_cast<double>(counts[p]);
        total += index[p];
    }
    const double centre = total / static_cast<double>(index.size());
    for (double& v : index) {
        v -= centre;
    }
    return index;
}

struct EsRun {
    double sse = 0.0;
    std::size_t n = 0;
    ModelState final_state;
};

/// One pass of the additive innovations recursion over the sample.
EsRun es_run(std::span<const double> y, const EsShape& shape, const ModelParams& p, int s,
             std::vector<double>* residuals = nullptr) {
    double level = y[0];
    double trend = shape.trend ? mean_first_difference(y, 10) : 0.0;
    std::vector<double> seasonal;
    if (shape.seasonal) {
        seasonal = initial_seasonal(y, s);
    }
    const double phi = shape.damped ? p.phi : 1.0;

    EsRun run;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double trend_term = shape.trend ? phi * trend : 0.0;
        const double seasonal_term =
            shape.seasonal ? seasonal[t % static_cast<std::size_t>(s)] : 0.0;
        const double predicted = level + trend_term + seasonal_term;
        const double e = y[t] - predicted;
        run.sse += e * e;
        if (residuals != nullptr) {
            residuals->push_back(e);
        }

        level = level + trend_term + p.alpha * e;
        if (shape.trend) {
            trend = phi * trend + p.beta * e;
        }
        if (shape.seasonal) {
            seasonal[t % static_cast<std::size_t>(s)] += p.gamma * e;
        }
    }
    run.n = y.size();
    run.final_state.level = level;
    run.final_state.trend = trend;
    run.final_state.seasonal = std::move(seasonal);
    return run;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Maps unconstrained simplex coordinates into the admissible box. The
/// rectangular raw space keeps the projection exact: alpha in (0,1],
/// beta = raw*alpha, gamma = raw*(1-alpha), phi in [0.8, 0.98].
ModelParams decode_params(const std::vector<double>& raw, const EsShape& shape) {
    ModelParams p;
    std::size_t k = 0;
    p.alpha = std::max(1e-4, clamp01(raw[k++]));
    if (shape.trend) {
        p.beta = clamp01(raw[k++]) * p.alpha;
    }
    if (shape.seasonal) {
        p.gamma = clamp01(raw[k++]) * (1.0 - p.alpha);
    }
    if (shape.damped) {
        p.phi = 0.8 + 0.18 * clamp01(raw[k++]);
    }
    return p;
}

FittedModel fit_es(std::span<const double> y, ModelKind kind, int s) {
    const EsShape shape = es_shape(kind);
    const int period = shape.seasonal ? s : 1;

    std::vector<double> start = {0.3};
    std::vector<double> step = {0.2};
    if (shape.trend) {
        start.push_back(0.1);
        step.push_back(0.2);
    }
    if (shape.seasonal) {
        start.push_back(0.1);
        step.push_back(0.2);
    }
    if (shape.damped) {
        start.push_back(0.8);  // phi ~ 0.944
        step.push_back(0.15);
    }

    const auto objective = [&](const std::vector<double>& raw) {
        return es_run(y, shape, decode_params(raw, shape), period).sse;
    };
    const util::NelderMeadResult opt = util::nelder_mead(objective, start, step, 500, 1e-8);

    FittedModel model;
    model.kind = kind;
    model.params = decode_params(opt.x, shape);
    model.periodicity = period;
    model.n_obs = y.size();
    const EsRun run = es_run(y, shape, model.params, period);
    model.state = run.final_state;
    model.sigma2 = run.sse / static_cast<double>(run.n);
    return model;
}

FittedModel fit_theta(std::span<const double> y) {
    // Classic equivalence: level-only smoothing plus drift b/2, b the OLS
    // slope of the series on time.
    const EsShape ses{false, false, false};
    std::vector<double> start = {0.3};
    std::vector<double> step = {0.2};
    const auto objective = [&](const std::vector<double>& raw) {
        return es_run(y, ses, decode_params(raw, ses), 1).sse;
    };
    const util::NelderMeadResult opt = util::nelder_mead(objective, start, step, 500, 1e-8);

    FittedModel model;
    model.kind = ModelKind::theta;
    model.params = decode_params(opt.x, ses);
    model.params.drift = ols_slope(y) / 2.0;
    model.periodicity = 1;
    model.n_obs = y.size();
    const EsRun run = es_run(y, ses, model.params, 1);
    model.state = run.final_state;
    model.sigma2 = run.sse / static_cast<double>(run.n);
    return model;
}

}  // namespace

std::optional<FittedModel> fit(std::span<const double> y, ModelKind kind, int s) {
    if (!kind_available(kind, y.size(), s)) {
        return std::nullopt;
    }
    FittedModel model;
    model.kind = kind;
    model.periodicity = kind_is_seasonal(kind) ? s : 1;
    model.n_obs = y.size();

    switch (kind) {
        case ModelKind::naive: {
            model.state.level = y.back();
            double sse = 0.0;
            for (std::size_t t = 1; t < y.size(); ++t) {
                const double e = y[t] - y[t - 1];
                sse += e * e;
            }
            model.sigma2 = sse / static_cast<double>(y.size() - 1);
            return model;
        }
        case ModelKind::rw_drift: {
            model.state.level = y.back();
            model.params.drift = (y.back() - y.front()) / static_cast<double>(y.size() - 1);
            double sse = 0.0;
            for (std::size_t t = 1; t < y.size(); ++t) {
                const double e = y[t] - y[t - 1] - model.params.drift;
                sse += e * e;
            }
            model.sigma2 = sse / static_cast<double>(y.size() - 1);
            return model;
        }
        case ModelKind::snaive: {
            const auto lag = static_cast<std::size_t>(s);
            model.state.seasonal.assign(y.end() - static_cast<long>(lag), y.end());
            double sse = 0.0;
            for (std::size_t t = lag; t < y.size(); ++t) {
                const double e = y[t] - y[t - lag];
                sse += e * e;
            }
            model.sigma2 = sse / static_cast<double>(y.size() - lag);
            return model;
        }
        case ModelKind::theta: return fit_theta(y);
        default: return fit_es(y, kind, s);
    }
}

std::vector<double> one_step_residuals(const FittedModel& model, std::span<const double> y) {
    std::vector<double> residuals;
    switch (model.kind) {
        case ModelKind::naive:
            for (std::size_t t = 1; t < y.size(); ++t) {
                residuals.push_back(y[t] - y[t - 1]);
            }
            return residuals;
        case ModelKind::rw_drift:
            for (std::size_t t = 1; t < y.size(); ++t) {
                residuals.push_back(y[t] - y[t - 1] - model.params.drift);
            }
            return residuals;
        case ModelKind::snaive: {
            const auto lag = static_cast<std::size_t>(model.periodicity);
            for (std::size_t t = lag; t < y.size(); ++t) {
                residuals.push_back(y[t] - y[t - lag]);
            }
            return residuals;
        }
        case ModelKind::theta:
            es_run(y, EsShape{false, false, false}, model.params, 1, &residuals);
            return residuals;
        default:
            es_run(y, es_shape(model.kind), model.params, model.periodicity, &residuals);
            return residuals;
    }
}

namespace {

double damped_sum(double phi, int h) {
    // phi + phi^2 + ... + phi^h
    double sum = 0.0;
    double pow = 1.0;
    for (int j = 0; j < h; ++j) {
        pow *= phi;
        sum += pow;
    }
    return sum;
}

std::vector<double> forecast_points(const FittedModel& m, int horizon) {
    std::vector<double> points(static_cast<std::size_t>(horizon));
    const auto s = static_cast<std::size_t>(m.periodicity);
    switch (m.kind) {
        case ModelKind::naive:
            std::fill(points.begin(), points.end(), m.state.level);
            return points;
        case ModelKind::rw_drift:
            for (int h = 1; h <= horizon; ++h) {
                points[h - 1] = m.state.level + m.params.drift * h;
            }
            return points;
        case ModelKind::snaive:
            for (int h = 1; h <= horizon; ++h) {
                points[h - 1] = m.state.seasonal[(h - 1) % s];
            }
            return points;
        case ModelKind::theta: {
            const double alpha = m.params.alpha;
            const double keep = 1.0 - std::pow(1.0 - alpha, static_cast<double>(m.n_obs));
            for (int h = 1; h <= horizon; ++h) {
                points[h - 1] =
                    m.state.level + m.params.drift * (static_cast<double>(h) - 1.0 + keep / alpha);
            }
            return points;
        }
        default: {
            const EsShape shape = es_shape(m.kind);
            for (int h = 1; h <= horizon; ++h) {
                double v = m.state.level;
                if (shape.trend) {
                    v += shape.damped ? damped_sum(m.params.phi, h) * m.state.trend
                                      : static_cast<double>(h) * m.state.trend;
                }
                if (shape.seasonal) {
                    v += m.state.seasonal[(m.n_obs + static_cast<std::size_t>(h) - 1) % s];
                }
                points[h - 1] = v;
            }
            return points;
        }
    }
}

/// Class-1 forecast-variance recursion: sigma_h^2 = sigma^2 (1 + sum of
/// squared cumulative weights c_j, j < h).
double sigma_h2(const FittedModel& m, int h) {
    const auto s = static_cast<std::size_t>(m.periodicity);
    switch (m.kind) {
        case ModelKind::naive:
        case ModelKind::rw_drift: return m.sigma2 * h;
        case ModelKind::snaive:
            return m.sigma2 * std::ceil(static_cast<double>(h) / static_cast<double>(s));
        case ModelKind::theta: {
            const double a = m.params.alpha;
            return m.sigma2 * (1.0 + (h - 1) * a * a);
        }
        default: {
            const EsShape shape = es_shape(m.kind);
            double acc = 1.0;
            for (int j = 1; j < h; ++j) {
                double c = m.params.alpha;
                if (shape.trend) {
                    c += shape.damped ? m.params.beta * damped_sum(m.params.phi, j)
                                      : m.params.beta * j;
                }
                if (shape.seasonal && static_cast<std::size_t>(j) % s == 0) {
                    c += m.params.gamma;
                }
                acc += c * c;
            }
            return m.sigma2 * acc;
        }
    }
}

}  // namespace

ForecastResult forecast(const FittedModel& model, int horizon, double level) {
    if (horizon < 1) {
        throw std::invalid_argument("forecast: horizon must be at least 1");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("forecast: level outside (0,1)");
    }
    ForecastResult result;
    result.points = forecast_points(model, horizon);
    result.lower.resize(result.points.size());
    result.upper.resize(result.points.size());
    const double z = util::normal_quantile(0.5 + level / 2.0);
    for (int h = 1; h <= horizon; ++h) {
        const double sd = std::sqrt(std::max(0.0, sigma_h2(model, h)));
        result.lower[h - 1] = result.points[h - 1] - z * sd;
        result.upper[h - 1] = result.points[h - 1] + z * sd;
    }
    return result;
}

BuiltPools build_pool(const core::SplitSeries& series, std::span<const ModelKind> kinds,
                      double interval_level) {
    if (kinds.empty()) {
        throw std::invalid_argument("build_pool: no kinds requested");
    }
    if (series.valid.empty() || series.test.empty()) {
        throw std::runtime_error("build_pool: series '" + series.id +
                                 "' lacks a validation or test segment");
    }
    const std::vector<double> insample = series.insample();

    std::vector<ModelKind> usable;
    BuiltPools built;
    for (ModelKind kind : kinds) {
        if (kind_available(kind, series.train.size(), series.periodicity)) {
            usable.push_back(kind);
        } else {
            built.skipped.push_back(kind);
        }
    }
    if (usable.empty()) {
        throw std::runtime_error("build_pool: no model available for series '" + series.id + "'");
    }

    auto make_window = [&](std::span<const double> history, int horizon) {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> points, lower, upper;
        for (ModelKind kind : usable) {
            const auto model = fit(history, kind, series.periodicity);
            if (!model) {
                throw std::runtime_error("build_pool: fit unexpectedly unavailable");
            }
            const ForecastResult fc = forecast(*model, horizon, interval_level);
            labels.emplace_back(kind_name(kind));
            points.push_back(fc.points);
            lower.push_back(fc.lower);
            upper.push_back(fc.upper);
        }
        PoolPair pair;
        pair.points = core::ForecastPool::create(labels, std::move(points));
        pair.intervals = core::IntervalPool::create(std::move(labels), std::move(lower),
                                                    std::move(upper), interval_level);
        return pair;
    };

    built.validation = make_window(series.train, static_cast<int>(series.valid.size()));
    built.test = make_window(insample, static_cast<int>(series.test.size()));
    return built;
}

std::vector<ModelKind> default_kinds(int s) {
    if (s < 2) {
        return {ModelKind::naive, ModelKind::rw_drift, ModelKind::theta,
                ModelKind::es_ann, ModelKind::es_aan, ModelKind::es_adn};
    }
    return {ModelKind::naive,  ModelKind::snaive, ModelKind::rw_drift, ModelKind::theta,
            ModelKind::es_ann, ModelKind::es_aan, ModelKind::es_adn,   ModelKind::es_ana,
            ModelKind::es_aaa, ModelKind::es_ada};
}

}  // namespace radtrim::forecasters
