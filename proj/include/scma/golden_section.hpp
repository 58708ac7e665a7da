#pragma once

#include <cmath>

namespace scma {

struct GoldenSectionResult {
    double argmax = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Maximizes a unimodal f on [lo, hi] until the bracket is narrower than tol.
template <typename F>
GoldenSectionResult golden_section_maximize(F&& f, double lo, double hi, double tol,
                                            int max_iterations = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iterations && (hi - lo) > tol; ++it) {
        // >= keeps the left part on ties
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x), it};
}

}  // namespace scma
