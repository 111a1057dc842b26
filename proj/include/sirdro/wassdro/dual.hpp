#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/product.hpp"
#include "sirdro/sir/expected_recourse.hpp"
#include "sirdro/sir/value_functions.hpp"

namespace sirdro {

// Wasserstein ambiguity ball around a reference product law.
struct WassersteinBall {
    ProductDistribution reference;
    double p = 1.0;
    double eps = 0.0;

    void validate() const {
        SIRDRO_REQUIRE(p >= 1.0, "wasserstein ball: order p must be >= 1");
        SIRDRO_REQUIRE(eps >= 0.0, "wasserstein ball: radius must be >= 0");
    }
};

// Dual potential/certificate (lambda, nu at the reference support points).
struct DualCertificate {
    double lambda = 0.0;
    std::vector<std::vector<double>> nu;  // per dimension, per support atom
    double objective = 0.0;
    int iterations = 0;
};

namespace detail {

// usc value of the one-dimensional function at the lattice point x + j.
inline double value_usc_at_lattice(double qp, double qm, long j) {
    if (j == 0) return std::max(qp, qm);
    return j > 0 ? qp * double(j + 1) : qm * double(1 - j);
}

}  // namespace detail

// nu^lambda(s, x) = sup_sbar { vbar(sbar, x) - lambda |s - sbar| } for p = 1.
// The supremum is attained on {s} union the adjacent lattice points (the gain
// per extra lattice step is q - lambda <= 0), so three candidates suffice.
inline double nu_lambda_1d(double qp, double qm, double lambda, double s, double x) {
    SIRDRO_REQUIRE(lambda >= std::max(qp, qm) - 1e-12,
                   "nu_lambda: requires lambda >= ||q||_inf (dual infeasible below)");
    double d = s - x;
    double best = value_usc_1d(qp, qm, d);
    long j_right = std::max(0L, static_cast<long>(std::ceil(d - kLatticeTol)));
    long j_left = std::min(0L, static_cast<long>(std::floor(d + kLatticeTol)));
    best = std::max(best, detail::value_usc_at_lattice(qp, qm, j_right) -
                              lambda * std::abs(x + double(j_right) - s));
    best = std::max(best, detail::value_usc_at_lattice(qp, qm, j_left) -
                              lambda * std::abs(x + double(j_left) - s));
    return best;
}

// Sawtooth excess r^lambda = nu^lambda - vbar via the three-branch closed
// forms; exactly on the lattice s - x in Z the branch expressions disagree
// with the sup definition, so there the value is reconciled as nu - vbar.
inline double r_lambda_1d(double qp, double qm, double lambda, double s, double x) {
    SIRDRO_REQUIRE(lambda >= std::max(qp, qm) - 1e-12,
                   "r_lambda: requires lambda >= ||q||_inf (dual infeasible below)");
    double d = s - x;
    if (std::abs(d - std::round(d)) <= kLatticeTol)
        return nu_lambda_1d(qp, qm, lambda, s, x) - value_usc_1d(qp, qm, d);
    double x_lam = x - (qp - qm) / lambda;
    if (qp >= qm) {
        if (s <= x_lam) return pos(qm - lambda * (s - floor_to(s, x)));
        if (s < x) return pos(qp - qm - lambda * (ceil_to(s, x) - s));
        return pos(qp - lambda * (ceil_to(s, x) - s));
    }
    if (s <= x) return pos(qm - lambda * (s - floor_to(s, x)));
    if (s < x_lam) return pos(qm - qp - lambda * (s - floor_to(s, x)));
    return pos(qp - lambda * (ceil_to(s, x) - s));
}

// Separable multi-dimensional dual potential.
inline double nu_lambda(const CostVector& q, double lambda, const std::vector<double>& s,
                        const TenderPoint& x) {
    SIRDRO_REQUIRE(q.dim() == s.size() && q.dim() == x.dim(), "nu_lambda: dimension mismatch");
    SIRDRO_REQUIRE(lambda >= q.inf_norm() - 1e-12,
                   "nu_lambda: requires lambda >= ||q||_inf");
    double total = 0.0;
    for (std::size_t i = 0; i < q.dim(); ++i)
        total += nu_lambda_1d(q.q[i].plus, q.q[i].minus, lambda, s[i], x.x[i]);
    return total;
}

// Exact E[nu^lambda(xi, x)] for one marginal: atoms use the sup formula;
// the density part integrates vbar (= v a.e.) in closed form plus the
// sawtooth r^lambda cut at its kinks (lattice points and the per-cell
// zero crossings at offsets q-/lambda and 1 - q+/lambda, plus x^lambda).
inline double expected_nu_lambda_1d(double qp, double qm, double lambda,
                                    const Distribution1D& d, double x) {
    double total = 0.0;
    for (const auto& a : d.atoms()) total += a.mass * nu_lambda_1d(qp, qm, lambda, a.loc, x);
    if (!d.has_density()) return total;
    total += expected_recourse_1d(qp, qm, Distribution1D::continuous(d.density()), x,
                                  RecourseVariant::kExact);
    const PiecewisePolynomial& f = d.density();
    double x_lam = x - (qp - qm) / lambda;
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
        double a = f.breaks[i], b = f.breaks[i + 1];
        if (f.pieces[i].is_zero()) continue;
        std::vector<double> cuts = {a, b};
        auto push = [&](double t) {
            if (t > a && t < b) cuts.push_back(t);
        };
        for (double t = ceil_to(a, x); t < b + 1.0; t += 1.0) {
            push(t);
            push(t - 1.0 + qm / lambda);   // left-branch zero crossing in cell (t-1, t)
            push(t - qp / lambda);         // right-branch zero crossing below t
            push(t - 1.0 + (qm - qp) / lambda);
            push(t - 1.0 - (qp - qm) / lambda + 1.0);
        }
        push(x_lam);
        push(x);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double c0 = cuts[k], c1 = cuts[k + 1];
            if (c1 - c0 <= 1e-14) continue;
            // r is affine on the open chunk; two interior samples pin it down
            double t1 = c0 + (c1 - c0) / 3.0, t2 = c0 + 2.0 * (c1 - c0) / 3.0;
            double r1 = r_lambda_1d(qp, qm, lambda, t1, x);
            double r2 = r_lambda_1d(qp, qm, lambda, t2, x);
            double slope = (r2 - r1) / (t2 - t1);
            Polynomial r_poly({r1 - slope * t1, slope});
            r_poly.trim(1e-15);
            if (r_poly.is_zero()) continue;
            total += (f.pieces[i] * r_poly).integral(c0, c1);
        }
    }
    return total;
}

}  // namespace sirdro
