#pragma once

#include <cstddef>
#include <vector>

namespace radtrim::util {

double mean(const std::vector<double>& values);

/// Sample variance with divisor n-1. Returns 0 for fewer than two values.
double sample_variance(const std::vector<double>& values);

/// Median-unbiased linear-interpolation quantile: with sorted values
/// x_(1)..x_(n) the p-quantile is x_(floor k) + (k - floor k) * (x_(ceil k) -
/// x_(floor k)) where k = 1 + p (n - 1). Matches the common statistical
/// software default (R type 7).
double quantile(std::vector<double> values, double p);

struct TukeyFences {
    double q1 = 0.0;
    double q3 = 0.0;
    double lower = 0.0;  // q1 - 1.5 (q3 - q1)
    double upper = 0.0;  // q3 + 1.5 (q3 - q1)
};

TukeyFences tukey_fences(const std::vector<double>& values);

/// Upper-tail quantile of the standard normal distribution via the
/// Wichura AS241 rational approximation; |error| < 1e-15 over (0, 1).
double normal_quantile(double p);

}  // namespace radtrim::util
