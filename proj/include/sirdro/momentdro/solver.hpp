#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/momentdro/moment_set.hpp"
#include "sirdro/numerics/lp.hpp"
#include "sirdro/sir/first_stage.hpp"
#include "sirdro/sir/value_functions.hpp"

namespace sirdro {

struct MomentDualSolution {
    double value = 0.0;
    std::vector<std::vector<double>> nu;  // per dimension, per moment spec
    std::vector<double> pi;               // per dimension
    int iterations = 0;
    double max_violation = 0.0;
};

namespace detail {

// Maximize vhat(s, x) - sum_k nu_k ghat_k(s) - pi over s in [L, U]: split at the
// vhat kinks and the ghat breakpoints, then per piece the objective is a
// polynomial of degree <= 4, maximized on derivative roots and endpoints
// (with a safety scan per piece).
struct MomentSeparation {
    double violation;
    double argmax;
};

inline MomentSeparation separate_moment_dim(double qp, double qm, double x,
                                            const MomentAmbiguitySet::Dimension& dim,
                                            const std::vector<double>& nu, double pi) {
    std::vector<double> cuts = {dim.lo, dim.hi};
    for (double t : {x - 0.5, x + 0.5})
        if (t > dim.lo && t < dim.hi) cuts.push_back(t);
    for (const auto& spec : dim.specs)
        for (double t : spec.hat_breakpoints())
            if (t > dim.lo && t < dim.hi) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    MomentSeparation best{-kInf, dim.lo};
    auto consider = [&](double s, double value) {
        if (value > best.violation) {
            best.violation = value;
            best.argmax = s;
        }
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double mid = 0.5 * (a + b);
        // vhat on this piece as a polynomial in s
        Polynomial obj;
        double d = mid - x;
        if (d + 0.5 > 0.0) obj += Polynomial({qp * (0.5 - x), qp});
        if (d - 0.5 < 0.0) obj += Polynomial({qm * (x + 0.5), -qm});
        for (std::size_t k = 0; k < dim.specs.size(); ++k)
            obj -= dim.specs[k].hat_polynomial(mid) * nu[k];
        obj -= Polynomial::constant(pi);
        consider(a, obj(a));
        consider(b, obj(b));
        for (double r : obj.derivative().roots_in(a, b)) consider(r, obj(r));
        int scan = std::min(512, std::max(8, int((b - a) / 1e-3)));
        for (int t = 1; t < scan; ++t) {
            double s = a + (b - a) * t / scan;
            consider(s, obj(s));
        }
    }
    return best;
}

}  // namespace detail

// Worst-case E[vhat] over a dense-grid primal restriction of the moment set:
// max sum w_j vhat(s_j, x) s.t. sum w_j ghat_k(s_j) = M_k, sum w_j = 1, w >= 0.
// Independent oracle for the cutting-plane dual; also the feasibility check.
inline LpSolution moment_grid_primal_1d(double qp, double qm,
                                        const MomentAmbiguitySet::Dimension& dim, double x,
                                        double step = 1e-3) {
    std::vector<double> pts;
    int count = std::max(2, int(std::ceil((dim.hi - dim.lo) / step)) + 1);
    count = std::min(count, 20001);
    for (int j = 0; j < count; ++j)
        pts.push_back(dim.lo + (dim.hi - dim.lo) * double(j) / double(count - 1));
    for (double t : {x - 0.5, x + 0.5})
        if (t > dim.lo && t < dim.hi) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    LinearProgram lp;
    lp.maximize = true;
    lp.objective.resize(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j)
        lp.objective[j] = value_hat_1d(qp, qm, pts[j] - x);
    for (const auto& spec : dim.specs) {
        std::vector<double> row(pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j) row[j] = spec.g_hat(pts[j]);
        lp.add_row(std::move(row), RowSense::kEq, spec.target);
    }
    lp.add_row(std::vector<double>(pts.size(), 1.0), RowSense::kEq, 1.0);
    return lp_solve(lp);
}

// Pragmatic moment-based DRSIR value at x: per-dimension semi-infinite dual
//   min sum_k M_k nu_k + pi  s.t.  sum_k ghat_k(s) nu_k + pi >= vhat(s, x),  s in [L, U],
// solved by cutting planes with exact separation.
inline MomentDualSolution pragmatic_moment_drsir(const CostVector& q,
                                                 const MomentAmbiguitySet& U, const TenderPoint& x,
                                                 double tol = 1e-7) {
    U.validate();
    SIRDRO_REQUIRE(q.dim() == U.dim() && q.dim() == x.dim(),
                   "pragmatic_moment_drsir: dimension mismatch");
    MomentDualSolution out;
    out.nu.resize(q.dim());
    out.pi.resize(q.dim());
    for (std::size_t i = 0; i < q.dim(); ++i) {
        const auto& dim = U.dims[i];
        double qp = q.q[i].plus, qm = q.q[i].minus, xi = x.x[i];
        // feasibility of the moment conditions on the support
        {
            LpSolution feas = moment_grid_primal_1d(qp, qm, dim, xi, 1e-2);
            SIRDRO_REQUIRE(feas.status != LpStatus::kInfeasible,
                           "pragmatic_moment_drsir: moment targets infeasible on the support");
        }
        std::vector<double> points = {dim.lo, dim.hi};
        for (double t : {xi - 0.5, xi + 0.5})
            if (t > dim.lo && t < dim.hi) points.push_back(t);
        for (const auto& spec : dim.specs) {
            double c = (spec.kind == MomentFunctionSpec::Kind::kAbsDeviation) ? spec.center
                                                                              : spec.target;
            if (c > dim.lo && c < dim.hi) points.push_back(c);
        }

        const std::size_t K = dim.specs.size();
        std::vector<double> nu(K, 0.0);
        double pi = 0.0;
        int iter = 0;
        double viol = kInf;
        for (; iter < 300; ++iter) {
            LinearProgram lp;
            lp.maximize = false;
            lp.objective.resize(K + 1);
            for (std::size_t k = 0; k < K; ++k) lp.objective[k] = dim.specs[k].target;
            lp.objective[K] = 1.0;
            lp.lower.assign(K + 1, -kInf);
            lp.upper.assign(K + 1, kInf);
            for (double s : points) {
                std::vector<double> row(K + 1);
                for (std::size_t k = 0; k < K; ++k) row[k] = dim.specs[k].g_hat(s);
                row[K] = 1.0;
                lp.add_row(std::move(row), RowSense::kGe, value_hat_1d(qp, qm, s - xi));
            }
            LpSolution sol = lp_solve(lp);
            SIRDRO_REQUIRE(sol.status != LpStatus::kUnbounded,
                           "pragmatic_moment_drsir: master unbounded (support too loose)");
            SIRDRO_REQUIRE(sol.status == LpStatus::kOptimal,
                           "pragmatic_moment_drsir: master LP failed: " + sol.message);
            for (std::size_t k = 0; k < K; ++k) nu[k] = sol.x[k];
            pi = sol.x[K];
            detail::MomentSeparation sep = detail::separate_moment_dim(qp, qm, xi, dim, nu, pi);
            viol = sep.violation;
            if (viol <= tol) {
                out.value += sol.objective;
                break;
            }
            points.push_back(sep.argmax);
        }
        SIRDRO_REQUIRE(viol <= tol,
                       "pragmatic_moment_drsir: cutting planes did not converge");
        out.nu[i] = nu;
        out.pi[i] = pi;
        out.iterations += iter + 1;
    }
    return out;
}

// Joint row generation for min_x { c^T x + worst-case E[vhat] } over the box:
// master LP over (x, nu, pi) where each generated point s contributes three
// linear cuts, one per affine piece of vhat(s, .) in x.
struct MomentIterationLog {
    int iteration;
    double objective;
    double violation;
};

inline FirstStageSolution solve_first_stage_moment(const FirstStageProblem& prob,
                                                   const CostVector& q,
                                                   const MomentAmbiguitySet& U,
                                                   double tol = 1e-7,
                                                   std::vector<MomentIterationLog>* log = nullptr) {
    prob.validate();
    U.validate();
    SIRDRO_REQUIRE(prob.dim() == q.dim() && prob.dim() == U.dim(),
                   "solve_first_stage_moment: dimension mismatch");
    const std::size_t m = prob.dim();

    // variable layout: x_0..x_{m-1}, then per dim (nu_k..., pi)
    std::vector<std::size_t> nu_offset(m);
    std::size_t nvars = m;
    for (std::size_t i = 0; i < m; ++i) {
        nu_offset[i] = nvars;
        nvars += U.dims[i].specs.size() + 1;
    }

    std::vector<std::vector<double>> points(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& dim = U.dims[i];
        points[i] = {dim.lo, dim.hi, 0.5 * (dim.lo + dim.hi)};
        for (const auto& spec : dim.specs) {
            double c = (spec.kind == MomentFunctionSpec::Kind::kAbsDeviation) ? spec.center
                                                                              : spec.target;
            if (c > dim.lo && c < dim.hi) points[i].push_back(c);
        }
    }

    FirstStageSolution sol;
    double viol = kInf;
    for (int iter = 0; iter < 400; ++iter) {
        LinearProgram lp;
        lp.maximize = false;
        lp.objective.assign(nvars, 0.0);
        lp.lower.assign(nvars, -kInf);
        lp.upper.assign(nvars, kInf);
        for (std::size_t i = 0; i < m; ++i) {
            lp.objective[i] = prob.c[i];
            lp.lower[i] = prob.box[i].first;
            lp.upper[i] = prob.box[i].second;
            const auto& dim = U.dims[i];
            for (std::size_t k = 0; k < dim.specs.size(); ++k)
                lp.objective[nu_offset[i] + k] = dim.specs[k].target;
            lp.objective[nu_offset[i] + dim.specs.size()] = 1.0;
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto& dim = U.dims[i];
            double qp = q.q[i].plus, qm = q.q[i].minus;
            for (double s : points[i]) {
                // vhat(s, x) = max{ qm(x - s + 1/2), qp(s - x + 1/2) + qm(x - s + 1/2),
                //                   qp(s - x + 1/2) }, each affine in x
                const double slopes[3] = {qm, qm - qp, -qp};
                const double consts[3] = {qm * (0.5 - s), qp * (s + 0.5) + qm * (0.5 - s),
                                          qp * (s + 0.5)};
                for (int j = 0; j < 3; ++j) {
                    std::vector<double> row(nvars, 0.0);
                    for (std::size_t k = 0; k < dim.specs.size(); ++k)
                        row[nu_offset[i] + k] = dim.specs[k].g_hat(s);
                    row[nu_offset[i] + dim.specs.size()] = 1.0;
                    row[i] = -slopes[j];
                    lp.add_row(std::move(row), RowSense::kGe, consts[j]);
                }
            }
        }
        LpSolution master = lp_solve(lp);
        SIRDRO_REQUIRE(master.status != LpStatus::kUnbounded,
                       "solve_first_stage_moment: master unbounded (support too loose)");
        SIRDRO_REQUIRE(master.status == LpStatus::kOptimal,
                       "solve_first_stage_moment: master LP failed: " + master.message);

        viol = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& dim = U.dims[i];
            std::vector<double> nu(dim.specs.size());
            for (std::size_t k = 0; k < dim.specs.size(); ++k)
                nu[k] = master.x[nu_offset[i] + k];
            double pi = master.x[nu_offset[i] + dim.specs.size()];
            detail::MomentSeparation sep = detail::separate_moment_dim(
                q.q[i].plus, q.q[i].minus, master.x[i], dim, nu, pi);
            if (sep.violation > tol) {
                points[i].push_back(sep.argmax);
                viol = std::max(viol, sep.violation);
            }
        }
        if (log != nullptr) log->push_back({iter, master.objective, viol});
        if (viol <= tol) {
            sol.x.x.assign(master.x.begin(), master.x.begin() + m);
            sol.objective = master.objective;
            return sol;
        }
    }
    throw Error("solve_first_stage_moment: row generation did not converge");
}

}  // namespace sirdro
