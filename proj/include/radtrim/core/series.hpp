#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace radtrim::core {

enum class Frequency { yearly, quarterly, monthly, weekly, daily, hourly, other };

std::string_view to_string(Frequency f);
std::optional<Frequency> frequency_from_string(std::string_view name);

/// Conventional seasonal-cycle length for a frequency, used when the input
/// does not carry an explicit periodicity.
int default_periodicity(Frequency f);

/**
 * One univariate series partitioned into training / validation / test
 * segments. The validation segment is held out during subset selection and
 * becomes part of the history when the test segment is scored.
 */
struct SplitSeries {
    std::string id;
    std::vector<double> train;
    std::vector<double> valid;
    std::vector<double> test;
    int periodicity = 1;
    Frequency frequency = Frequency::other;

    /// train + valid concatenated (the history available when forecasting
    /// the test window).
    std::vector<double> insample() const;
};

enum class RejectReason { too_short, constant_train, nonfinite };

std::string_view to_string(RejectReason r);

/// Outcome of series validation. Rejection is a value, not an exception,
/// so batch ingestion can skip bad series and keep going.
struct SeriesValidation {
    std::optional<SplitSeries> series;
    std::optional<RejectReason> reason;

    bool ok() const { return series.has_value(); }
};

/// Checks a raw series against the admission rules: finite observations,
/// training segment of at least two points, training segment not constant.
/// valid_len and test_len are taken from the end of `observations`; the
/// remainder is the training segment.
SeriesValidation validate_series(std::string id, const std::vector<double>& observations,
                                 std::size_t valid_len, std::size_t test_len, int periodicity,
                                 Frequency frequency);

}  // namespace radtrim::core
