#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/distribution1d.hpp"
#include "sirdro/distributions/joint_discrete.hpp"
#include "sirdro/numerics/lp.hpp"
#include "sirdro/numerics/polynomial.hpp"

namespace sirdro {

namespace detail {

// Polynomial expression of a cdf on a breakpoint-free interval around `mid`.
inline Polynomial cdf_polynomial_at(const Distribution1D& d, double mid) {
    double step = 0.0;
    for (const auto& a : d.atoms())
        if (a.loc <= mid) step += a.mass;
    Polynomial p = Polynomial::constant(step);
    if (d.has_density()) {
        PiecewisePolynomial C = d.density().antiderivative(0.0);
        if (mid >= C.support_hi())
            p += Polynomial::constant(C.pieces.back()(C.support_hi()));
        else if (mid > C.support_lo())
            p += C.pieces[C.segment_index(mid)];
    }
    return p;
}

}  // namespace detail

// Type-p Wasserstein distance between one-dimensional laws.
//   p = 1: exact integral of |F1 - F2| (piecewise-polynomial calculus with
//          sign-change root finding per segment).
//   p > 1: quantile coupling, (int_0^1 |F1^-1 - F2^-1|^p du)^(1/p), by
//          composite Gauss-Legendre quadrature with bisection quantiles.
inline double wasserstein_1d(const Distribution1D& d1, const Distribution1D& d2, double p = 1.0) {
    SIRDRO_REQUIRE(p >= 1.0, "wasserstein_1d: requires p >= 1");
    if (p == 1.0) {
        std::vector<double> cuts;
        auto add = [&](const Distribution1D& d) {
            for (const auto& a : d.atoms()) cuts.push_back(a.loc);
            for (double b : d.density().breaks) cuts.push_back(b);
        };
        add(d1);
        add(d2);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return b - a <= 1e-12; }),
                   cuts.end());
        if (cuts.size() < 2) return 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1];
            double mid = 0.5 * (a + b);
            Polynomial D = detail::cdf_polynomial_at(d1, mid) - detail::cdf_polynomial_at(d2, mid);
            D.trim(1e-15);
            if (D.is_zero()) continue;
            std::vector<double> pts = D.roots_in(a, b, 1e-10);
            pts.push_back(a);
            pts.push_back(b);
            std::sort(pts.begin(), pts.end());
            for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
                if (pts[k + 1] - pts[k] <= 0) continue;
                total += std::abs(D.integral(pts[k], pts[k + 1]));
            }
        }
        return total;
    }
    if (d1.is_discrete() && d2.is_discrete()) {
        // monotone coupling is optimal for convex costs; exact, no quadrature
        std::size_t i = 0, j = 0;
        double ri = d1.atoms()[0].mass, rj = d2.atoms()[0].mass, cost = 0.0;
        while (i < d1.atoms().size() && j < d2.atoms().size()) {
            double w = std::min(ri, rj);
            cost += w * std::pow(std::abs(d1.atoms()[i].loc - d2.atoms()[j].loc), p);
            ri -= w;
            rj -= w;
            if (ri <= 1e-15 && ++i < d1.atoms().size()) ri = d1.atoms()[i].mass;
            if (rj <= 1e-15 && ++j < d2.atoms().size()) rj = d2.atoms()[j].mass;
        }
        return std::pow(cost, 1.0 / p);
    }
    // quantile route
    const int panels = 2048;
    // 4-point Gauss-Legendre nodes/weights on [-1, 1]
    static const std::array<double, 4> gx = {-0.8611363115940526, -0.3399810435848563,
                                             0.3399810435848563, 0.8611363115940526};
    static const std::array<double, 4> gw = {0.3478548451374538, 0.6521451548625461,
                                             0.6521451548625461, 0.3478548451374538};
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        double u0 = double(k) / panels, u1 = double(k + 1) / panels;
        double c = 0.5 * (u0 + u1), h = 0.5 * (u1 - u0);
        for (int j = 0; j < 4; ++j) {
            double u = c + h * gx[j];
            double q = std::abs(d1.quantile(u) - d2.quantile(u));
            acc += gw[j] * h * std::pow(q, p);
        }
    }
    return std::pow(acc, 1.0 / p);
}

// Optimal transportation LP between two small finitely-supported joint laws,
// ground cost ||s - sbar||_p^p; returns the distance (cost^(1/p)).
inline double wasserstein_joint_discrete(const JointDiscrete& d1, const JointDiscrete& d2,
                                         double p = 1.0) {
    d1.validate();
    d2.validate();
    SIRDRO_REQUIRE(d1.dim() == d2.dim(), "wasserstein_joint_discrete: dimension mismatch");
    const std::size_t n1 = d1.points.size(), n2 = d2.points.size();
    LinearProgram lp;
    lp.maximize = false;
    lp.objective.resize(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            double c = 0.0;
            for (std::size_t k = 0; k < d1.dim(); ++k)
                c += std::pow(std::abs(d1.points[i].s[k] - d2.points[j].s[k]), p);
            lp.objective[i * n2 + j] = c;
        }
    for (std::size_t i = 0; i < n1; ++i) {
        std::vector<double> row(n1 * n2, 0.0);
        for (std::size_t j = 0; j < n2; ++j) row[i * n2 + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, d1.points[i].mass);
    }
    for (std::size_t j = 0; j < n2; ++j) {
        std::vector<double> row(n1 * n2, 0.0);
        for (std::size_t i = 0; i < n1; ++i) row[i * n2 + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, d2.points[j].mass);
    }
    LpSolution sol = lp_solve(lp);
    SIRDRO_REQUIRE(sol.status == LpStatus::kOptimal,
                   "wasserstein_joint_discrete: transportation LP failed: " + sol.message);
    return std::pow(std::max(sol.objective, 0.0), 1.0 / p);
}

// Monotone (quantile) coupling between two discrete one-dimensional laws;
// optimal for every convex cost |s - t|^p, p >= 1.
struct TransportMove {
    double from, to, mass;
};

inline std::vector<TransportMove> monotone_plan_1d(const Distribution1D& a,
                                                   const Distribution1D& b) {
    SIRDRO_REQUIRE(a.is_discrete() && b.is_discrete(), "monotone_plan_1d: discrete laws only");
    std::vector<TransportMove> plan;
    std::size_t i = 0, j = 0;
    double ri = a.atoms().empty() ? 0.0 : a.atoms()[0].mass;
    double rj = b.atoms().empty() ? 0.0 : b.atoms()[0].mass;
    while (i < a.atoms().size() && j < b.atoms().size()) {
        double w = std::min(ri, rj);
        if (w > 0) plan.push_back({a.atoms()[i].loc, b.atoms()[j].loc, w});
        ri -= w;
        rj -= w;
        if (ri <= 1e-15) {
            ++i;
            if (i < a.atoms().size()) ri = a.atoms()[i].mass;
        }
        if (rj <= 1e-15) {
            ++j;
            if (j < b.atoms().size()) rj = b.atoms()[j].mass;
        }
    }
    return plan;
}

// Coordinate-by-coordinate transport of a joint discrete law so that its
// marginals become those of `target`, moving along one axis at a time via the
// monotone plan. Realizes the separability equality for product couplings.
inline JointDiscrete reshape_marginals(const JointDiscrete& start, const JointDiscrete& target) {
    SIRDRO_REQUIRE(start.dim() == target.dim(), "reshape_marginals: dimension mismatch");
    JointDiscrete current = start;
    for (std::size_t axis = 0; axis < start.dim(); ++axis) {
        Distribution1D from = current.project(axis);
        Distribution1D to = target.project(axis);
        std::vector<TransportMove> plan = monotone_plan_1d(from, to);
        JointDiscrete next;
        for (const auto& pt : current.points) {
            double remaining = pt.mass;
            // split this point's mass across the destinations of its marginal source,
            // consuming the plan proportionally
            for (auto& mv : plan) {
                if (std::abs(mv.from - pt.s[axis]) > 1e-12 || mv.mass <= 1e-15) continue;
                double w = std::min(remaining, mv.mass);
                if (w <= 0) continue;
                JointDiscrete::Point np = pt;
                np.s[axis] = mv.to;
                np.mass = w;
                next.points.push_back(std::move(np));
                mv.mass -= w;
                remaining -= w;
                if (remaining <= 1e-15) break;
            }
            if (remaining > 1e-12) {
                JointDiscrete::Point np = pt;
                np.mass = remaining;
                next.points.push_back(std::move(np));
            }
        }
        next.dedup();
        current = std::move(next);
    }
    return current;
}

}  // namespace sirdro
