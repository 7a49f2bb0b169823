#pragma once

#include <optional>
#include <string>
#include <vector>

namespace radtrim::harness {

struct McbEntry {
    std::string algorithm;
    double mean_rank = 0.0;
    double half_width = 0.0;
};

struct McbResult {
    std::vector<McbEntry> entries;
    std::size_t n_used = 0;     // series entering the ranking
    std::size_t n_dropped = 0;  // series with an undefined score for some algorithm
};

/// Multiple-comparisons-with-the-best test over a K x N score matrix
/// (lower scores better). Within each series algorithms get average ranks
/// on ties; mean ranks carry the interval half-width
/// 0.5 * q_{alpha,K} * sqrt(K (K+1) / (6 N)) with q from a bundled
/// Nemenyi-style table (K <= 20, alpha = 0.05 only). Two algorithms differ
/// significantly iff their intervals are disjoint.
McbResult mcb_test(const std::vector<std::vector<std::optional<double>>>& scores,
                   const std::vector<std::string>& names, double alpha);

/// Interval-overlap verdict on two entries of the same test.
bool mcb_significant(const McbEntry& a, const McbEntry& b);

}  // namespace radtrim::harness
