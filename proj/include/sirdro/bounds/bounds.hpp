#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/product.hpp"
#include "sirdro/distributions/wasserstein.hpp"
#include "sirdro/sir/expected_recourse.hpp"

namespace sirdro {

// One-dimensional stability bound: sqrt growth up to 1/2, linear beyond.
inline double bound_g(double qinf, double eps) {
    SIRDRO_REQUIRE(qinf >= 0.0 && eps >= 0.0, "bound_g: arguments must be nonnegative");
    if (eps <= 0.5) return qinf * std::sqrt(2.0 * eps);
    return qinf * (eps + 0.5);
}

// Multi-dimensional stability bound; reduces to bound_g for m = 1.
inline double bound_G(const std::vector<double>& qbar, double eps) {
    SIRDRO_REQUIRE(!qbar.empty() && eps >= 0.0, "bound_G: bad arguments");
    double n2 = 0.0, ninf = 0.0;
    for (double v : qbar) {
        SIRDRO_REQUIRE(v >= 0.0, "bound_G: qbar must be nonnegative");
        n2 += v * v;
        ninf = std::max(ninf, v);
    }
    n2 = std::sqrt(n2);
    if (ninf == 0.0) return 0.0;
    double eps_bar = 0.5 * (n2 / ninf) * (n2 / ninf);
    if (eps <= eps_bar) return n2 * std::sqrt(2.0 * eps);
    return n2 * std::sqrt(2.0 * eps_bar) + ninf * (eps - eps_bar);
}

// Gap between the standard and pragmatic worst cases: G(eps) - ||q||inf eps.
inline double bound_G_star(const std::vector<double>& qbar, double eps) {
    double ninf = 0.0;
    for (double v : qbar) ninf = std::max(ninf, v);
    return bound_G(qbar, eps) - ninf * eps;
}

// Total-variation error-bound kernel.
inline double bound_H(double t) {
    SIRDRO_REQUIRE(t >= 0.0, "bound_H: total variation must be nonnegative");
    if (std::isinf(t)) return 1.0;
    if (t <= 4.0) return t / 8.0;
    return 1.0 - 2.0 / t;
}

// Literature bound sum_i (q_i+ + q_i-) H(tv_i) for product laws, where the
// conditional densities coincide with the marginals.
inline double bound_H_tv(const std::vector<double>& q_sums, const std::vector<double>& tv) {
    SIRDRO_REQUIRE(q_sums.size() == tv.size(), "bound_H_tv: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < tv.size(); ++i) total += q_sums[i] * bound_H(tv[i]);
    return total;
}

// Total variation of the density part: sum of jumps plus per-segment integral
// of |f'| (split on the sign changes of f'). Infinite when atoms are present.
inline double total_variation(const Distribution1D& d) {
    if (!d.atoms().empty()) return kInf;
    if (!d.has_density()) return kInf;
    const PiecewisePolynomial& f = d.density();
    double tv = 0.0;
    double prev_right = 0.0;  // density just left of the current breakpoint
    for (std::size_t i = 0; i < f.pieces.size(); ++i) {
        double a = f.breaks[i], b = f.breaks[i + 1];
        tv += std::abs(f.pieces[i](a) - prev_right);
        Polynomial df = f.pieces[i].derivative();
        std::vector<double> cuts = df.roots_in(a, b);
        cuts.push_back(a);
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            tv += std::abs(f.pieces[i](cuts[k + 1]) - f.pieces[i](cuts[k]));
        prev_right = f.pieces[i](b);
    }
    tv += std::abs(prev_right);
    return tv;
}

enum class ConvexApprox { kShiftedLp, kAlpha };

struct BoundReport {
    std::string name;
    double wasserstein_distance = 0.0;
    double bound_wasserstein = 0.0;
    std::optional<double> bound_tv;
    std::optional<double> empirical_gap;

    std::string csv_row() const {
        auto fmt = [](double v) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", v);
            return std::string(buf);
        };
        std::string row = name + "," + fmt(wasserstein_distance) + "," + fmt(bound_wasserstein);
        row += ",";
        if (bound_tv) row += fmt(*bound_tv);
        row += ",";
        if (empirical_gap) row += fmt(*empirical_gap);
        return row;
    }
    static std::string csv_header() { return "case,W1,bound_wass,bound_tv,empirical_gap"; }
};

// Error bound for the convex approximation Q^{P~} of Q^P where P~ is the
// smoothed (shifted LP-relaxation) or cell-averaged (alpha) distribution:
// W1 summed across marginals (product-coupling equality), then bound_G.
// Optionally attaches the empirical sup-gap over an x-grid.
inline BoundReport error_bound_convex_approx(const CostVector& q, const ProductDistribution& P,
                                             ConvexApprox kind,
                                             const std::vector<double>& alpha = {},
                                             bool empirical = false) {
    SIRDRO_REQUIRE(q.dim() == P.dim(), "error_bound_convex_approx: dimension mismatch");
    std::vector<Distribution1D> approx;
    for (std::size_t i = 0; i < P.dim(); ++i) {
        if (kind == ConvexApprox::kShiftedLp) {
            approx.push_back(gamma_transform(P.marginal(i)));
        } else {
            SIRDRO_REQUIRE(alpha.size() == P.dim(),
                           "error_bound_convex_approx: alpha vector required");
            approx.push_back(gamma_alpha_transform(P.marginal(i), alpha[i]));
        }
    }
    BoundReport report;
    report.name = (kind == ConvexApprox::kShiftedLp) ? "shifted-lp" : "alpha";
    double w1 = 0.0;
    for (std::size_t i = 0; i < P.dim(); ++i)
        w1 += wasserstein_1d(P.marginal(i), approx[i], 1.0);
    report.wasserstein_distance = w1;
    std::vector<double> qbar(P.dim()), qsum(P.dim()), tv(P.dim());
    for (std::size_t i = 0; i < P.dim(); ++i) {
        qbar[i] = q.bar(i);
        qsum[i] = q.q[i].plus + q.q[i].minus;
        tv[i] = total_variation(P.marginal(i));
    }
    report.bound_wasserstein = bound_G(qbar, w1);
    report.bound_tv = bound_H_tv(qsum, tv);

    if (empirical) {
        ProductDistribution Pa(approx);
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < P.dim(); ++i) {
            lo = std::min(lo, P.marginal(i).support_lo());
            hi = std::max(hi, P.marginal(i).support_hi());
        }
        auto gap_at = [&](double t) {
            TenderPoint x(std::vector<double>(P.dim(), t));
            return std::abs(expected_recourse(q, P, x, RecourseVariant::kExact) -
                            expected_recourse(q, Pa, x, RecourseVariant::kExact));
        };
        double best = 0.0, best_x = lo - 2.0;
        for (double t = lo - 2.0; t <= hi + 2.0 + 1e-12; t += 1e-2) {
            double gp = gap_at(t);
            if (gp > best) {
                best = gp;
                best_x = t;
            }
        }
        for (double t = best_x - 1e-2; t <= best_x + 1e-2; t += 1e-3) {
            if (t < lo - 2.0 || t > hi + 2.0) continue;
            best = std::max(best, gap_at(t));
        }
        report.empirical_gap = best;
    }
    return report;
}

}  // namespace sirdro
