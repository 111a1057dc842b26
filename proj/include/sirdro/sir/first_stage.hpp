#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/numerics/minimize.hpp"
#include "sirdro/sir/expected_recourse.hpp"

namespace sirdro {

// min_x { c^T x + Q(x) } over a per-dimension box.
struct FirstStageProblem {
    std::vector<double> c;
    std::vector<std::pair<double, double>> box;  // [lo, hi], +-inf allowed for variant hat

    std::size_t dim() const { return c.size(); }
    void validate() const {
        SIRDRO_REQUIRE(c.size() == box.size(), "first stage: c/box dimension mismatch");
        for (const auto& [lo, hi] : box)
            SIRDRO_REQUIRE(lo <= hi, "first stage: box lower bound exceeds upper bound");
    }
};

enum class FirstStageVariant { kHat, kExactGrid };

struct FirstStageSolution {
    TenderPoint x;
    double objective = 0.0;
};

namespace detail {

// Minimize a piecewise-affine convex function by evaluating it on its kinks
// (plus interval ends); ties resolve to the smallest x.
template <typename F>
std::pair<double, double> minimize_on_candidates(F&& f, std::vector<double> cand) {
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    double best_x = cand.front(), best_v = f(cand.front());
    for (double t : cand) {
        double v = f(t);
        if (v < best_v - 1e-12) {
            best_v = v;
            best_x = t;
        }
    }
    return {best_x, best_v};
}

inline std::pair<double, double> solve_dim_hat(double c, double qp, double qm,
                                               const Distribution1D& d, double lo, double hi) {
    auto f = [&](double x) {
        return c * x + expected_recourse_1d(qp, qm, d, x, RecourseVariant::kHat);
    };
    // slope of E[v_hat] is -qp at -inf and +qm at +inf
    if (std::isinf(lo) || std::isinf(hi)) {
        SIRDRO_REQUIRE(!(std::isinf(lo) && c - qp > 0),
                       "solve_first_stage: objective unbounded below toward -inf");
        SIRDRO_REQUIRE(!(std::isinf(hi) && c + qm < 0),
                       "solve_first_stage: objective unbounded below toward +inf");
        double span = 1.0 + (d.support_hi() - d.support_lo());
        if (std::isinf(lo)) lo = d.support_lo() - span - 1.0;
        if (std::isinf(hi)) hi = d.support_hi() + span + 1.0;
    }
    if (d.is_discrete()) {
        // kinks of the objective sit at atom +- 1/2; enumerate them exactly
        std::vector<double> cand = {lo, hi};
        for (const auto& a : d.atoms()) {
            for (double t : {a.loc - 0.5, a.loc + 0.5})
                if (t > lo && t < hi) cand.push_back(t);
        }
        return minimize_on_candidates(f, std::move(cand));
    }
    MinimizeResult r = minimize_convex_1d(f, lo, hi, 1e-9);
    return {r.x, r.value};
}

inline std::pair<double, double> solve_dim_exact_grid(double c, double qp, double qm,
                                                      const Distribution1D& d, double lo,
                                                      double hi, double step_per_unit) {
    SIRDRO_REQUIRE(std::isfinite(lo) && std::isfinite(hi),
                   "solve_first_stage: exact-grid requires a finite box");
    auto f = [&](double x) {
        return c * x + expected_recourse_1d(qp, qm, d, x, RecourseVariant::kExact);
    };
    double width = hi - lo;
    double h = std::max(width * step_per_unit, 1e-12);
    std::vector<double> cand;
    if (width == 0.0) {
        cand.push_back(lo);
    } else {
        for (double t = lo; t < hi; t += h) cand.push_back(t);
        cand.push_back(hi);
    }
    // the objective jumps where an atom (or density breakpoint) hits the lattice
    auto add_lattice = [&](double s) {
        if (!std::isfinite(s)) return;
        for (double t = s - std::floor(s - lo); t <= hi + 1e-12; t += 1.0)
            if (t >= lo - 1e-12) cand.push_back(std::clamp(t, lo, hi));
    };
    for (const auto& a : d.atoms()) add_lattice(a.loc);
    for (double b : d.density().breaks) add_lattice(b);
    return minimize_on_candidates(f, std::move(cand));
}

}  // namespace detail

// Separable first-stage minimization. Variant kHat minimizes the convex
// smoothed objective per dimension (exactly on atom kinks for discrete laws,
// golden-section otherwise). Variant kExactGrid minimizes the exact, generally
// non-convex objective by grid search with jump points included; ties break
// toward the smallest x.
inline FirstStageSolution solve_first_stage(const FirstStageProblem& prob, const CostVector& q,
                                            const ProductDistribution& P, FirstStageVariant var,
                                            double grid_step_per_unit = 1e-3) {
    prob.validate();
    SIRDRO_REQUIRE(prob.dim() == q.dim() && prob.dim() == P.dim(),
                   "solve_first_stage: dimension mismatch");
    FirstStageSolution sol;
    sol.x.x.resize(prob.dim());
    for (std::size_t i = 0; i < prob.dim(); ++i) {
        auto [lo, hi] = prob.box[i];
        std::pair<double, double> r =
            (var == FirstStageVariant::kHat)
                ? detail::solve_dim_hat(prob.c[i], q.q[i].plus, q.q[i].minus, P.marginal(i), lo, hi)
                : detail::solve_dim_exact_grid(prob.c[i], q.q[i].plus, q.q[i].minus,
                                               P.marginal(i), lo, hi, grid_step_per_unit);
        sol.x.x[i] = r.first;
        sol.objective += r.second;
    }
    return sol;
}

}  // namespace sirdro
