#pragma once

#include <functional>
#include <vector>

namespace radtrim::util {

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int iterations = 0;
};

/// Deterministic Nelder-Mead simplex minimizer. The simplex is seeded from
/// a fixed start point plus per-coordinate steps, so identical inputs give
/// identical trajectories. Stops when the spread of function values across
/// the simplex falls below ftol or after max_iter iterations.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& step,
                             int max_iter = 500, double ftol = 1e-8);

}  // namespace radtrim::util
