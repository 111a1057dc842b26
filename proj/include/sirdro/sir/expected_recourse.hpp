#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/product.hpp"
#include "sirdro/numerics/polynomial.hpp"
#include "sirdro/sir/value_functions.hpp"

namespace sirdro {

enum class RecourseVariant { kExact, kUsc, kHat, kLp };

namespace detail {

// Polynomial expression of the chosen value-function variant on an interval
// that crosses none of its breakpoints; `mid` selects the branch.
inline Polynomial value_piece(double qp, double qm, double x, double mid, RecourseVariant var) {
    double d = mid - x;
    switch (var) {
        case RecourseVariant::kExact:
        case RecourseVariant::kUsc:
            // piecewise constant between lattice points
            return Polynomial::constant(value_1d(qp, qm, d));
        case RecourseVariant::kLp: {
            if (d >= 0.0) return Polynomial({-qp * x, qp});   // qp (s - x)
            return Polynomial({qm * x, -qm});                 // qm (x - s)
        }
        case RecourseVariant::kHat: {
            Polynomial p;
            if (d + 0.5 > 0.0) p += Polynomial({qp * (0.5 - x), qp});   // qp (s - x + 1/2)
            if (d - 0.5 < 0.0) p += Polynomial({qm * (x + 0.5), -qm});  // qm (x - s + 1/2)
            return p;
        }
    }
    return Polynomial();
}

inline double atom_value(double qp, double qm, double d, RecourseVariant var) {
    switch (var) {
        case RecourseVariant::kExact: return value_1d(qp, qm, d);
        case RecourseVariant::kUsc: return value_usc_1d(qp, qm, d);
        case RecourseVariant::kHat: return value_hat_1d(qp, qm, d);
        case RecourseVariant::kLp: return value_lp_1d(qp, qm, d);
    }
    return 0.0;
}

}  // namespace detail

// Exact one-dimensional expected value of the chosen variant under `d`:
// atoms are evaluated pointwise, density segments are split at the variant's
// breakpoints (lattice x+Z, or the kinks at x and x+-1/2) and integrated in
// closed form.
inline double expected_recourse_1d(double qp, double qm, const Distribution1D& d, double x,
                                   RecourseVariant var) {
    double total = 0.0;
    for (const auto& a : d.atoms()) total += a.mass * detail::atom_value(qp, qm, a.loc - x, var);
    if (!d.has_density()) return total;

    const PiecewisePolynomial& f = d.density();
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
        double a = f.breaks[i], b = f.breaks[i + 1];
        if (f.pieces[i].is_zero()) continue;
        std::vector<double> cuts = {a, b};
        switch (var) {
            case RecourseVariant::kExact:
            case RecourseVariant::kUsc: {
                for (double t = ceil_to(a, x); t < b; t += 1.0)
                    if (t > a) cuts.push_back(t);
                break;
            }
            case RecourseVariant::kLp: {
                if (x > a && x < b) cuts.push_back(x);
                break;
            }
            case RecourseVariant::kHat: {
                if (x - 0.5 > a && x - 0.5 < b) cuts.push_back(x - 0.5);
                if (x + 0.5 > a && x + 0.5 < b) cuts.push_back(x + 0.5);
                break;
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double c0 = cuts[k], c1 = cuts[k + 1];
            if (c1 - c0 <= 0.0) continue;
            Polynomial w = detail::value_piece(qp, qm, x, 0.5 * (c0 + c1), var);
            if (w.is_zero()) continue;
            total += (f.pieces[i] * w).integral(c0, c1);
        }
    }
    return total;
}

// Q(x) = sum_i E[v_i(xi_i, x_i)] for the chosen variant (separable, exact).
inline double expected_recourse(const CostVector& q, const ProductDistribution& P,
                                const TenderPoint& x, RecourseVariant var) {
    SIRDRO_REQUIRE(q.dim() == P.dim() && q.dim() == x.dim(),
                   "expected_recourse: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < q.dim(); ++i)
        total += expected_recourse_1d(q.q[i].plus, q.q[i].minus, P.marginal(i), x.x[i], var);
    return total;
}

}  // namespace sirdro
