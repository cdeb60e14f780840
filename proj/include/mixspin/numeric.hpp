#pragma once

#include "mixspin/error.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace mixspin::numeric {

// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is
// zero). Stops when the bracket is narrower than abs_tol.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw ComputationError("bisection: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (int iter = 0; iter < 400 && hi - lo > abs_tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0)
            return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Widens [lo, hi] geometrically (lo /= factor, hi *= factor) until f changes
// sign across it, at most max_expansions times. Positive domain only.
inline std::pair<double, double> expand_bracket(const std::function<double(double)>& f, double lo, double hi,
                                                double factor = 10.0, int max_expansions = 6)
{
    for (int k = 0; k <= max_expansions; ++k) {
        const double flo = f(lo);
        const double fhi = f(hi);
        if (flo == 0.0 || fhi == 0.0 || std::signbit(flo) != std::signbit(fhi))
            return {lo, hi};
        lo /= factor;
        hi *= factor;
    }
    throw ComputationError("no sign change found in bracket up to [" + std::to_string(lo * factor) + ", " +
                           std::to_string(hi / factor) + "]");
}

} // namespace mixspin::numeric
