#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/joint_discrete.hpp"
#include "sirdro/numerics/lp.hpp"
#include "sirdro/wassdro/dual.hpp"

namespace sirdro {

// Candidate-destination grid controls for the transportation oracle.
struct GridSpec {
    double step = 1e-3;              // fine step near the hull and around lattice points
    double pad = 2.0;                // base padding beyond the hull (added to eps)
    std::size_t max_uniform = 4000;  // cap on uniform grid points per dimension
    double far_growth = 1.3;         // geometric thinning of the far lattice tail
    int max_range_doublings = 6;     // adaptive range verification rounds
    double stabilize_tol = 2e-4;     // stop when a doubling changes the value this little
    std::size_t split_grid = 20;     // budget-split resolution for m = 2
};

enum class OracleSense { kMax, kMin };
enum class OracleVariant { kUsc, kHat };

struct OracleResult {
    double value = 0.0;
    JointDiscrete worst;     // an achieving discrete law (marginals are what matter)
    bool grid_converged = true;
    double budget_used = 0.0;
};

namespace detail {

struct Oracle1DResult {
    double value = 0.0;
    std::vector<Atom> worst;
    double budget_used = 0.0;
};

inline double oracle_payoff(double qp, double qm, double d, OracleVariant var,
                            OracleSense sense) {
    if (var == OracleVariant::kHat) return value_hat_1d(qp, qm, d);
    // v is lower semicontinuous, vbar upper semicontinuous: the worst case for
    // a sup is attained through vbar, for an inf through v itself
    return sense == OracleSense::kMax ? value_usc_1d(qp, qm, d) : value_1d(qp, qm, d);
}

// Transportation LP over a candidate destination grid for one dimension:
// max/min sum_kj w_kj payoff(d_j) s.t. sum_j w_kj = p_k, sum transport cost <= eps^p.
inline Oracle1DResult oracle_1d_solve(double qp, double qm, const Distribution1D& ref, double x,
                                      double p, double eps, OracleVariant var, OracleSense sense,
                                      const GridSpec& grid, double far_scale) {
    const auto& atoms = ref.atoms();
    const int n = static_cast<int>(atoms.size());
    double lo = ref.support_lo(), hi = ref.support_hi();

    std::set<double> dest;
    auto push = [&](double t) { dest.insert(t); };
    // dense lattice (with +-h shoulders) near the hull, geometric tail beyond.
    // The tail must reach far: the adversary can move a small mass a distance D
    // at marginal rate approaching ||q||inf, and truncating at D leaves an
    // O(1/D) gap; sizing D by the target accuracy costs only log(D) columns.
    double near_pad = eps + grid.pad;
    double qinf = std::max(qp, qm);
    double far_reach =
        far_scale * std::max(near_pad, qinf * (1.0 + eps) * (3.0 + hi - lo) /
                                           std::max(grid.stabilize_tol, 1e-8));
    for (double t = ceil_to(lo - near_pad, x); t <= hi + near_pad + 1e-12; t += 1.0) {
        push(t);
        push(t - grid.step);
        push(t + grid.step);
    }
    for (double off = std::max(near_pad, 1.0); off <= far_reach; off *= grid.far_growth) {
        for (double t : {floor_to(lo - off, x), ceil_to(hi + off, x)}) {
            push(t);
            push(t - grid.step);
            push(t + grid.step);
        }
    }
    push(floor_to(lo - far_reach, x));
    push(ceil_to(hi + far_reach, x));
    if (var == OracleVariant::kHat) {
        push(x - 0.5);
        push(x + 0.5);
        push(x - 0.5 - grid.step);
        push(x + 0.5 + grid.step);
    }
    // uniform near-hull grid
    {
        double a = lo - (eps + grid.pad), b = hi + eps + grid.pad;
        std::size_t count = std::min<std::size_t>(
            grid.max_uniform, std::max<std::size_t>(2, std::size_t((b - a) / grid.step) + 1));
        if (n > 0 && count * std::size_t(n) > 200000) count = 200000 / std::size_t(n);
        if (count >= 2) {
            double h = (b - a) / double(count - 1);
            for (std::size_t k = 0; k < count; ++k) push(a + h * double(k));
        }
    }

    std::vector<double> dests(dest.begin(), dest.end());
    const int nd = static_cast<int>(dests.size());
    std::vector<double> payoff(nd);
    for (int j = 0; j < nd; ++j) payoff[j] = oracle_payoff(qp, qm, dests[j] - x, var, sense);

    // columns: per source, a stay column followed by all shared destinations
    SparseLp lp;
    lp.maximize = (sense == OracleSense::kMax);
    lp.num_rows = n + 1;
    lp.senses.assign(n, RowSense::kEq);
    lp.senses.push_back(RowSense::kLe);
    lp.rhs.clear();
    for (const auto& a : atoms) lp.rhs.push_back(a.mass);
    lp.rhs.push_back(std::pow(eps, p));

    std::vector<int> stay_cols;
    for (int k = 0; k < n; ++k) {
        int c = lp.add_col(oracle_payoff(qp, qm, atoms[k].loc - x, var, sense), 0.0, kInf,
                           {{k, 1.0}});
        stay_cols.push_back(c);
        for (int j = 0; j < nd; ++j) {
            double cost = std::pow(std::abs(atoms[k].loc - dests[j]), p);
            if (cost == 0.0) continue;  // stay column already covers this
            lp.add_col(payoff[j], 0.0, kInf, {{k, 1.0}, {n, cost}});
        }
    }
    std::vector<int> warm = stay_cols;
    warm.push_back(static_cast<int>(lp.cols.size()) + n);  // the budget row's slack
    LpSolution sol = solve_sparse_lp(lp, &warm);
    SIRDRO_REQUIRE(sol.status == LpStatus::kOptimal,
                   "worst_case_oracle: transportation LP failed: " + sol.message);

    Oracle1DResult out;
    out.value = sol.objective;
    // reconstruct the achieving marginal and the budget actually used
    std::vector<Atom> achieved;
    int col = 0;
    for (int k = 0; k < n; ++k) {
        double stay_mass = sol.x[col++];
        if (stay_mass > 1e-14) achieved.push_back({atoms[k].loc, stay_mass});
        for (int j = 0; j < nd; ++j) {
            double cost = std::pow(std::abs(atoms[k].loc - dests[j]), p);
            if (cost == 0.0) continue;
            double w = sol.x[col++];
            if (w > 1e-14) {
                achieved.push_back({dests[j], w});
                out.budget_used += w * cost;
            }
        }
    }
    out.worst = std::move(achieved);
    return out;
}

inline Oracle1DResult oracle_1d_adaptive(double qp, double qm, const Distribution1D& ref,
                                         double x, double p, double eps, OracleVariant var,
                                         OracleSense sense, const GridSpec& grid,
                                         bool* converged) {
    double scale = 1.0;
    Oracle1DResult prev = oracle_1d_solve(qp, qm, ref, x, p, eps, var, sense, grid, scale);
    for (int round = 0; round < grid.max_range_doublings; ++round) {
        scale *= 2.0;
        Oracle1DResult next = oracle_1d_solve(qp, qm, ref, x, p, eps, var, sense, grid, scale);
        if (std::abs(next.value - prev.value) <= grid.stabilize_tol) return next;
        prev = next;
    }
    if (converged != nullptr) *converged = false;
    return prev;
}

}  // namespace detail

// Discretized worst-case (or best-case) expectation over the Wasserstein ball:
// a transportation LP over candidate destinations including every lattice point
// x_i + Z in range (usc-evaluated), their +-h shoulders, the smoothed kinks,
// and a uniform near-hull grid. The range is extended adaptively because the
// adversary may move small masses far at marginal rate ||q||inf. For m = 2 the
// budget is split across dimensions by grid search.
inline OracleResult worst_case_oracle(const CostVector& q, const WassersteinBall& ball,
                                      const TenderPoint& x, const GridSpec& grid = {},
                                      OracleSense sense = OracleSense::kMax,
                                      OracleVariant var = OracleVariant::kUsc) {
    ball.validate();
    SIRDRO_REQUIRE(ball.reference.all_discrete(),
                   "worst_case_oracle: reference marginals must be discrete");
    SIRDRO_REQUIRE(q.dim() == ball.reference.dim() && q.dim() == x.dim(),
                   "worst_case_oracle: dimension mismatch");
    SIRDRO_REQUIRE(q.dim() <= 2, "worst_case_oracle: joint grid supports m <= 2 only");

    OracleResult result;
    if (q.dim() == 1) {
        detail::Oracle1DResult r =
            detail::oracle_1d_adaptive(q.q[0].plus, q.q[0].minus, ball.reference.marginal(0),
                                       x.x[0], ball.p, ball.eps, var, sense, grid,
                                       &result.grid_converged);
        result.value = r.value;
        result.budget_used = r.budget_used;
        for (const auto& a : r.worst) result.worst.points.push_back({{a.loc}, a.mass});
        return result;
    }

    // m = 2: split eps^p across the dimensions. Each one-dimensional value is
    // concave (convex for kMin) in its budget share — an LP value as a function
    // of the right-hand side — so golden section over the split is exact up to
    // its tolerance. A coarse grid pass seeds the bracket.
    const double total_budget = std::pow(ball.eps, ball.p);
    bool conv = true;
    auto value_at = [&](double e0p, detail::Oracle1DResult* r0_out,
                        detail::Oracle1DResult* r1_out) {
        double e0 = std::pow(std::max(e0p, 0.0), 1.0 / ball.p);
        double e1 = std::pow(std::max(total_budget - e0p, 0.0), 1.0 / ball.p);
        detail::Oracle1DResult r0 =
            detail::oracle_1d_adaptive(q.q[0].plus, q.q[0].minus, ball.reference.marginal(0),
                                       x.x[0], ball.p, e0, var, sense, grid, &conv);
        detail::Oracle1DResult r1 =
            detail::oracle_1d_adaptive(q.q[1].plus, q.q[1].minus, ball.reference.marginal(1),
                                       x.x[1], ball.p, e1, var, sense, grid, &conv);
        double v = r0.value + r1.value;
        if (r0_out != nullptr) *r0_out = r0;
        if (r1_out != nullptr) *r1_out = r1;
        return v;
    };
    const double sign = (sense == OracleSense::kMax) ? 1.0 : -1.0;
    double best = -kInf, best_t = 0.0;
    const std::size_t K = std::max<std::size_t>(2, grid.split_grid);
    for (std::size_t k = 0; k <= K; ++k) {
        double t = total_budget * double(k) / double(K);
        double v = sign * value_at(t, nullptr, nullptr);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = std::max(0.0, best_t - total_budget / double(K));
        double b = std::min(total_budget, best_t + total_budget / double(K));
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = sign * value_at(x1, nullptr, nullptr);
        double f2 = sign * value_at(x2, nullptr, nullptr);
        for (int it = 0; it < 60 && b - a > 1e-6 * (1.0 + total_budget); ++it) {
            if (f1 >= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = sign * value_at(x1, nullptr, nullptr);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = sign * value_at(x2, nullptr, nullptr);
            }
        }
        double mid = 0.5 * (a + b);
        if (sign * value_at(mid, nullptr, nullptr) > best) best_t = mid;
    }
    detail::Oracle1DResult best0, best1;
    result.value = value_at(best_t, &best0, &best1);
    result.grid_converged = conv;
    result.budget_used = best0.budget_used + best1.budget_used;
    // product-form achieving law; only the marginals matter for the value
    for (const auto& a0 : best0.worst)
        for (const auto& a1 : best1.worst)
            if (a0.mass * a1.mass > 1e-15)
                result.worst.points.push_back({{a0.loc, a1.loc}, a0.mass * a1.mass});
    return result;
}

}  // namespace sirdro
