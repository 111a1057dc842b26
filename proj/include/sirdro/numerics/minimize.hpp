#pragma once

#include <cmath>
#include <utility>

#include "sirdro/common.hpp"

namespace sirdro {

struct MinimizeResult {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for a convex (or unimodal) function on [lo, hi].
// Returns x within `tol` of the true minimizer.
template <typename F>
MinimizeResult minimize_convex_1d(F&& f, double lo, double hi, double tol = 1e-9) {
    SIRDRO_REQUIRE(lo <= hi, "minimize_convex_1d: requires lo <= hi");
    if (hi - lo <= tol) {
        double x = 0.5 * (lo + hi);
        return {x, f(x)};
    }
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    // keep the better of the bracketing probes for flat regions
    if (f1 < fx) {
        x = x1;
        fx = f1;
    }
    if (f2 < fx) {
        x = x2;
        fx = f2;
    }
    return {x, fx};
}

}  // namespace sirdro
