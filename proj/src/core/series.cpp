#include "radtrim/core/series.hpp"

#include <cmath>

namespace radtrim::core {

std::string_view to_string(Frequency f) {
    switch (f) {
        case Frequency::yearly: return "yearly";
        case Frequency::quarterly: return "quarterly";
        case Frequency::monthly: return "monthly";
        case Frequency::weekly: return "weekly";
        case Frequency::daily: return "daily";
        case Frequency::hourly: return "hourly";
        case Frequency::other: return "other";
    }
    return "other";
}

std::optional<Frequency> frequency_from_string(std::string_view name) {
    if (name == "yearly") return Frequency::yearly;
    if (name == "quarterly") return Frequency::quarterly;
    if (name == "monthly") return Frequency::monthly;
    if (name == "weekly") return Frequency::weekly;
    if (name == "daily") return Frequency::daily;
    if (name == "hourly") return Frequency::hourly;
    if (name == "other") return Frequency::other;
    return std::nullopt;
}

int default_periodicity(Frequency f) {
    switch (f) {
        case Frequency::yearly: return 1;
        case Frequency::quarterly: return 4;
        case Frequency::monthly: return 12;
        case Frequency::weekly: return 52;
        case Frequency::daily: return 7;
        case Frequency::hourly: return 168;
        case Frequency::other: return 1;
    }
    return 1;
}

std::vector<double> SplitSeries::insample() const {
    std::vector<double> all = train;
    all.insert(all.end(), valid.begin(), valid.end());
    return all;
}

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::too_short: return "too-short";
        case RejectReason::constant_train: return "constant-train";
        case RejectReason::nonfinite: return "nonfinite";
    }
    return "unknown";
}

SeriesValidation validate_series(std::string id, const std::vector<double>& observations,
                                 std::size_t valid_len, std::size_t test_len, int periodicity,
                                 Frequency frequency) {
    SeriesValidation out;
    for (double v : observations) {
        if (!std::isfinite(v)) {
            out.reason = RejectReason::nonfinite;
            return out;
        }
    }
    const std::size_t holdout = valid_len + test_len;
    if (observations.size() < holdout + 2) {
        out.reason = RejectReason::too_short;
        return out;
    }
    const std::size_t train_len = observations.size() - holdout;
    bool constant = true;
    for (std::size_t t = 1; t < train_len; ++t) {
        if (observations[t] != observations[0]) {
            constant = false;
            break;
        }
    }
    if (constant) {
        out.reason = RejectReason::constant_train;
        return out;
    }

    SplitSeries s;
    s.id = std::move(id);
    s.train.assign(observations.begin(), observations.begin() + static_cast<long>(train_len));
    s.valid.assign(observations.begin() + static_cast<long>(train_len),
                   observations.begin() + static_cast<long>(train_len + valid_len));
    s.test.assign(observations.begin() + static_cast<long>(train_len + valid_len),
                  observations.end());
    s.periodicity = periodicity < 1 ? 1 : periodicity;
    s.frequency = frequency;
    out.series = std::move(s);
    return out;
}

}  // namespace radtrim::core
