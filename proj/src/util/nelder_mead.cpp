#include "radtrim/util/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace radtrim::util {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& step,
                             int max_iter, double ftol) {
    const std::size_t n = start.size();
    if (n == 0 || step.size() != n) {
        throw std::invalid_argument("nelder_mead: dimension mismatch");
    }

    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += step[i];
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = f(simplex[i]);
    }

    // Index sort keeps ties stable so runs are reproducible.
    std::vector<std::size_t> order(n + 1);
    NelderMeadResult result;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];

        if (std::fabs(fv[worst] - fv[best]) <= ftol * (std::fabs(fv[best]) + ftol)) {
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t d = 0; d < n; ++d) {
                centroid[d] += simplex[i][d];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d) {
                p[d] = centroid[d] + coef * (centroid[d] - simplex[worst][d]);
            }
            return p;
        };

        std::vector<double> reflected = blend(kReflect);
        const double f_reflected = f(reflected);
        if (f_reflected < fv[best]) {
            std::vector<double> expanded = blend(kExpand);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                fv[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                fv[worst] = f_reflected;
            }
        } else if (f_reflected < fv[second_worst]) {
            simplex[worst] = std::move(reflected);
            fv[worst] = f_reflected;
        } else {
            std::vector<double> contracted = blend(-kContract);
            const double f_contracted = f(contracted);
            if (f_contracted < fv[worst]) {
                simplex[worst] = std::move(contracted);
                fv[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) {
                        continue;
                    }
                    for (std::size_t d = 0; d < n; ++d) {
                        simplex[i][d] =
                            simplex[best][d] + kShrink * (simplex[i][d] - simplex[best][d]);
                    }
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }

    const std::size_t best =
        static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    result.x = simplex[best];
    result.fx = fv[best];
    result.iterations = iter;
    return result;
}

}  // namespace radtrim::util
