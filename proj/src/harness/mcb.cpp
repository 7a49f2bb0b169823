#include "radtrim/harness/mcb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace radtrim::harness {

namespace {

/// Upper-0.05 critical values of the studentized range statistic divided
/// by sqrt(2) (Nemenyi), indexed by the number of algorithms K = 2..20.
constexpr double kCriticalValues005[] = {
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948319, 3.030879,
    3.101730, 3.163684, 3.218654, 3.268004, 3.312739, 3.353618, 3.391230,
    3.426041, 3.458425, 3.488685, 3.517073, 3.543799,
};

double critical_value(std::size_t k, double alpha) {
    if (std::fabs(alpha - 0.05) > 1e-12) {
        throw std::invalid_argument("mcb_test: bundled critical values cover alpha = 0.05 only");
    }
    if (k < 2 || k > 20) {
        throw std::invalid_argument("mcb_test: bundled critical values cover 2 <= K <= 20");
    }
    return kCriticalValues005[k - 2];
}

/// Ranks one series' scores, assigning tied entries the average of the
/// positions they span.
std::vector<double> average_ranks(const std::vector<double>& scores) {
    const std::size_t k = scores.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t p = i; p <= j; ++p) {
            ranks[order[p]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

McbResult mcb_test(const std::vector<std::vector<std::optional<double>>>& scores,
                   const std::vector<std::string>& names, double alpha) {
    const std::size_t k = scores.size();
    if (k < 2 || names.size() != k) {
        throw std::invalid_argument("mcb_test: need at least two algorithms with names");
    }
    const std::size_t n_total = scores.front().size();
    for (const auto& row : scores) {
        if (row.size() != n_total) {
            throw std::invalid_argument("mcb_test: ragged score matrix");
        }
    }

    std::vector<double> rank_sums(k, 0.0);
    std::size_t used = 0;
    for (std::size_t series = 0; series < n_total; ++series) {
        bool complete = true;
        std::vector<double> column(k);
        for (std::size_t a = 0; a < k; ++a) {
            if (!scores[a][series]) {
                complete = false;
                break;
            }
            column[a] = *scores[a][series];
        }
        if (!complete) {
            continue;
        }
        const std::vector<double> ranks = average_ranks(column);
        for (std::size_t a = 0; a < k; ++a) {
            rank_sums[a] += ranks[a];
        }
        ++used;
    }
    if (used < 2) {
        throw std::invalid_argument("mcb_test: need at least two series with complete scores");
    }

    const double q = critical_value(k, alpha);
    const double kd = static_cast<double>(k);
    const double half =
        0.5 * q * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(used)));

    McbResult result;
    result.n_used = used;
    result.n_dropped = n_total - used;
    result.entries.reserve(k);
    for (std::size_t a = 0; a < k; ++a) {
        result.entries.push_back({names[a], rank_sums[a] / static_cast<double>(used), half});
    }
    return result;
}

bool mcb_significant(const McbEntry& a, const McbEntry& b) {
    return std::fabs(a.mean_rank - b.mean_rank) > a.half_width + b.half_width;
}

}  // namespace radtrim::harness
