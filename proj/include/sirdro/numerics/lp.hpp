#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sirdro/common.hpp"

namespace sirdro {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kSingular };

enum class RowSense { kLe, kEq, kGe };

// Dense LP description: objective, constraint rows with sense, rhs, variable bounds.
// Bounds default to [0, +inf) when the bound vectors are left empty.
struct LinearProgram {
    bool maximize = false;
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<RowSense> senses;
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }

    void add_row(std::vector<double> coeffs, RowSense sense, double b) {
        rows.push_back(std::move(coeffs));
        senses.push_back(sense);
        rhs.push_back(b);
    }
};

// Sparse-column form used internally and by the transportation oracles, which
// would not fit in memory as dense rows.
struct SparseLp {
    bool maximize = false;
    int num_rows = 0;
    std::vector<std::vector<std::pair<int, double>>> cols;  // (row, value) entries
    std::vector<double> obj;
    std::vector<double> lower;  // -inf allowed
    std::vector<double> upper;  // +inf allowed
    std::vector<RowSense> senses;
    std::vector<double> rhs;

    int add_col(double c, double lo, double hi, std::vector<std::pair<int, double>> entries) {
        cols.push_back(std::move(entries));
        obj.push_back(c);
        lower.push_back(lo);
        upper.push_back(hi);
        return static_cast<int>(cols.size()) - 1;
    }
};

struct LpSolution {
    LpStatus status = LpStatus::kSingular;
    std::vector<double> x;          // structural variables only
    double objective = 0.0;
    std::vector<double> row_duals;  // in the original (max/min) sense
    double cs_residual = 0.0;       // max primal/dual-feasibility residual at the optimum
    long iterations = 0;
    std::string message;
};

namespace detail {

// Bounded-variable two-phase revised simplex with an explicit basis inverse.
// Dantzig pricing with a Bland's-rule fallback once stalling is detected.
class Simplex {
public:
    explicit Simplex(const SparseLp& lp) : in_(lp) {}

    LpSolution solve(const std::vector<int>* warm_basis) {
        build();
        LpSolution sol;
        if (warm_basis != nullptr && try_warm_start(*warm_basis)) {
            // feasible warm basis: phase 2 directly
        } else if (!phase1(sol)) {
            return sol;
        }
        set_phase2_costs();
        LpStatus st = iterate();
        finish(sol, st);
        return sol;
    }

private:
    static constexpr double kPivotTol = 1e-10;
    static constexpr double kDualTol = 1e-9;
    static constexpr double kFeasTol = 1e-9;
    static constexpr int kRefactorEvery = 512;

    enum class VStat { kBasic, kAtLower, kAtUpper, kFree };

    const SparseLp& in_;
    int m_ = 0;           // rows
    int n_all_ = 0;       // structural + slack + artificial columns
    int n_struct_ = 0;
    int n_slack_begin_ = 0;
    int n_art_begin_ = 0;

    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> cost_;       // current-phase costs
    std::vector<double> real_cost_;  // phase-2 costs (sign-adjusted for maximize)
    std::vector<double> lo_, up_;
    std::vector<double> b_;

    std::vector<VStat> stat_;
    std::vector<int> basis_;         // column index per row
    std::vector<double> xval_;       // value per column
    std::vector<double> binv_;       // m x m row-major
    long iters_ = 0;
    long stall_ = 0;
    bool bland_ = false;
    bool singular_ = false;

    double& binv(int i, int j) { return binv_[std::size_t(i) * m_ + j]; }

    void build() {
        m_ = in_.num_rows;
        n_struct_ = static_cast<int>(in_.cols.size());
        n_slack_begin_ = n_struct_;
        n_art_begin_ = n_struct_ + m_;
        n_all_ = n_struct_ + 2 * m_;

        cols_ = in_.cols;
        cols_.resize(n_all_);
        lo_ = in_.lower;
        up_ = in_.upper;
        lo_.resize(n_all_, 0.0);
        up_.resize(n_all_, 0.0);
        real_cost_.assign(n_all_, 0.0);
        double sign = in_.maximize ? -1.0 : 1.0;
        for (int j = 0; j < n_struct_; ++j) real_cost_[j] = sign * in_.obj[j];
        b_ = in_.rhs;

        for (int i = 0; i < m_; ++i) {
            int j = n_slack_begin_ + i;
            cols_[j] = {{i, 1.0}};
            switch (in_.senses[i]) {
                case RowSense::kLe: lo_[j] = 0.0;   up_[j] = kInf; break;
                case RowSense::kEq: lo_[j] = 0.0;   up_[j] = 0.0;  break;
                case RowSense::kGe: lo_[j] = -kInf; up_[j] = 0.0;  break;
            }
        }
    }

    double initial_value(int j) const {
        if (std::isfinite(lo_[j])) return lo_[j];
        if (std::isfinite(up_[j])) return up_[j];
        return 0.0;
    }

    VStat initial_stat(int j) const {
        if (std::isfinite(lo_[j])) return VStat::kAtLower;
        if (std::isfinite(up_[j])) return VStat::kAtUpper;
        return VStat::kFree;
    }

    // residual b - A * x over non-artificial columns
    std::vector<double> residual() const {
        std::vector<double> r = b_;
        for (int j = 0; j < n_art_begin_; ++j) {
            if (xval_[j] == 0.0) continue;
            for (auto [i, v] : cols_[j]) r[i] -= v * xval_[j];
        }
        return r;
    }

    bool try_warm_start(const std::vector<int>& warm) {
        if (static_cast<int>(warm.size()) != m_) return false;
        for (int j : warm)
            if (j < 0 || j >= n_art_begin_) return false;
        xval_.assign(n_all_, 0.0);
        stat_.assign(n_all_, VStat::kAtLower);
        for (int j = 0; j < n_art_begin_; ++j) {
            stat_[j] = initial_stat(j);
            xval_[j] = initial_value(j);
        }
        for (int i = 0; i < m_; ++i) {
            int j = n_art_begin_ + i;  // artificials pinned out
            stat_[j] = VStat::kAtLower;
            xval_[j] = 0.0;
            lo_[j] = up_[j] = 0.0;
        }
        basis_ = warm;
        for (int j : warm) {
            stat_[j] = VStat::kBasic;
            xval_[j] = 0.0;
        }
        if (!refactor()) return false;
        std::vector<double> r = residual();
        // add back basic contributions that residual() subtracted as zero (they are zero)
        std::vector<double> xb(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += binv(i, k) * r[k];
            xb[i] = s;
        }
        for (int i = 0; i < m_; ++i) {
            int j = basis_[i];
            if (xb[i] < lo_[j] - kFeasTol || xb[i] > up_[j] + kFeasTol) return false;
            xval_[j] = xb[i];
        }
        return true;
    }

    bool phase1(LpSolution& sol) {
        xval_.assign(n_all_, 0.0);
        stat_.assign(n_all_, VStat::kAtLower);
        for (int j = 0; j < n_art_begin_; ++j) {
            stat_[j] = initial_stat(j);
            xval_[j] = initial_value(j);
        }
        std::vector<double> r = residual();
        basis_.resize(m_);
        cost_.assign(n_all_, 0.0);
        for (int i = 0; i < m_; ++i) {
            int j = n_art_begin_ + i;
            double s = (r[i] < 0.0) ? -1.0 : 1.0;
            cols_[j] = {{i, s}};
            lo_[j] = 0.0;
            up_[j] = kInf;
            cost_[j] = 1.0;
            basis_[i] = j;
            stat_[j] = VStat::kBasic;
            xval_[j] = std::abs(r[i]);
        }
        binv_.assign(std::size_t(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv(i, i) = (r[i] < 0.0) ? -1.0 : 1.0;

        LpStatus st = iterate();
        if (st == LpStatus::kSingular || st == LpStatus::kIterationLimit) {
            finish(sol, st);
            return false;
        }
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_art_begin_) infeas += std::abs(xval_[basis_[i]]);
        if (infeas > 1e-7) {
            finish(sol, LpStatus::kInfeasible);
            return false;
        }
        // pin artificials; any still basic sit at zero (redundant rows)
        for (int i = 0; i < m_; ++i) {
            int j = n_art_begin_ + i;
            if (stat_[j] != VStat::kBasic) {
                lo_[j] = up_[j] = 0.0;
                xval_[j] = 0.0;
                stat_[j] = VStat::kAtLower;
            } else {
                lo_[j] = up_[j] = 0.0;
            }
        }
        return true;
    }

    void set_phase2_costs() {
        cost_ = real_cost_;
        bland_ = false;
        stall_ = 0;
    }

    bool refactor() {
        // Gauss-Jordan inversion of the basis matrix.
        std::vector<double> a(std::size_t(m_) * m_, 0.0);
        for (int c = 0; c < m_; ++c)
            for (auto [i, v] : cols_[basis_[c]]) a[std::size_t(i) * m_ + c] = v;
        binv_.assign(std::size_t(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv(i, i) = 1.0;
        for (int c = 0; c < m_; ++c) {
            int piv = -1;
            double best = kPivotTol;
            for (int i = c; i < m_; ++i) {
                double v = std::abs(a[std::size_t(i) * m_ + c]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (piv < 0) return false;
            if (piv != c) {
                for (int k = 0; k < m_; ++k) {
                    std::swap(a[std::size_t(piv) * m_ + k], a[std::size_t(c) * m_ + k]);
                    std::swap(binv(piv, k), binv(c, k));
                }
            }
            double d = a[std::size_t(c) * m_ + c];
            for (int k = 0; k < m_; ++k) {
                a[std::size_t(c) * m_ + k] /= d;
                binv(c, k) /= d;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == c) continue;
                double f = a[std::size_t(i) * m_ + c];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    a[std::size_t(i) * m_ + k] -= f * a[std::size_t(c) * m_ + k];
                    binv(i, k) -= f * binv(c, k);
                }
            }
        }
        return true;
    }

    std::vector<double> dual_y() const {
        std::vector<double> y(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            for (int k = 0; k < m_; ++k) y[k] += cb * binv_[std::size_t(i) * m_ + k];
        }
        return y;
    }

    double reduced_cost(int j, const std::vector<double>& y) const {
        double d = cost_[j];
        for (auto [i, v] : cols_[j]) d -= y[i] * v;
        return d;
    }

    LpStatus iterate() {
        const long max_iters = 20000 + 40L * (n_all_ + m_);
        while (true) {
            if (iters_ > max_iters) return LpStatus::kIterationLimit;
            std::vector<double> y = dual_y();

            int enter = -1;
            double enter_score = kDualTol;
            int enter_dir = +1;
            for (int j = 0; j < n_all_; ++j) {
                if (stat_[j] == VStat::kBasic) continue;
                if (lo_[j] == up_[j] && stat_[j] != VStat::kFree) continue;  // fixed
                double d = reduced_cost(j, y);
                int dir = 0;
                double score = 0.0;
                if (stat_[j] == VStat::kAtLower && d < -kDualTol) {
                    dir = +1;
                    score = -d;
                } else if (stat_[j] == VStat::kAtUpper && d > kDualTol) {
                    dir = -1;
                    score = d;
                } else if (stat_[j] == VStat::kFree && std::abs(d) > kDualTol) {
                    dir = d < 0 ? +1 : -1;
                    score = std::abs(d);
                }
                if (dir == 0) continue;
                if (bland_) {
                    enter = j;
                    enter_dir = dir;
                    break;
                }
                if (score > enter_score) {
                    enter = j;
                    enter_score = score;
                    enter_dir = dir;
                }
            }
            if (enter < 0) return LpStatus::kOptimal;

            // direction through the basis: w = B^-1 A_enter
            std::vector<double> w(m_, 0.0);
            for (auto [i, v] : cols_[enter])
                for (int k = 0; k < m_; ++k) w[k] += v * binv(k, i);

            // ratio test; entering moves by t >= 0 in direction enter_dir
            double limit = kInf;
            int leave_row = -1;
            bool leave_to_upper = false;
            double own_span = up_[enter] - lo_[enter];
            if (std::isfinite(own_span)) limit = own_span;

            for (int i = 0; i < m_; ++i) {
                double delta = -enter_dir * w[i];  // d x_B[i] / dt
                if (std::abs(delta) < kPivotTol) continue;
                int bj = basis_[i];
                double room = delta > 0 ? up_[bj] - xval_[bj] : lo_[bj] - xval_[bj];
                double t = room / delta;
                if (t < 0) t = 0;  // degenerate
                if (t < limit - 1e-12 ||
                    (t < limit + 1e-12 && leave_row >= 0 &&
                     std::abs(w[i]) > std::abs(w[leave_row]))) {
                    if (t <= limit) {
                        limit = t;
                        leave_row = i;
                        leave_to_upper = delta > 0;
                    }
                }
            }

            if (!std::isfinite(limit)) return LpStatus::kUnbounded;

            ++iters_;
            if (limit <= 1e-13) {
                if (++stall_ > 400) bland_ = true;
            } else {
                stall_ = 0;
            }

            if (leave_row < 0) {
                // bound flip: entering jumps to its opposite bound
                double t = limit;
                for (int i = 0; i < m_; ++i) xval_[basis_[i]] -= enter_dir * w[i] * t;
                xval_[enter] += enter_dir * t;
                stat_[enter] = (enter_dir > 0) ? VStat::kAtUpper : VStat::kAtLower;
                continue;
            }

            // pivot
            double t = limit;
            for (int i = 0; i < m_; ++i) xval_[basis_[i]] -= enter_dir * w[i] * t;
            xval_[enter] = xval_[enter] + enter_dir * t;
            int leave = basis_[leave_row];
            xval_[leave] = leave_to_upper ? up_[leave] : lo_[leave];
            stat_[leave] = leave_to_upper ? VStat::kAtUpper : VStat::kAtLower;
            if (!std::isfinite(xval_[leave])) {  // free variable forced out (degenerate)
                xval_[leave] = 0.0;
                stat_[leave] = VStat::kFree;
            }

            double piv = w[leave_row];
            if (std::abs(piv) < kPivotTol) {
                if (!refactor()) return LpStatus::kSingular;
                continue;
            }
            basis_[leave_row] = enter;
            stat_[enter] = VStat::kBasic;
            // eta update of the inverse
            double inv_piv = 1.0 / piv;
            for (int k = 0; k < m_; ++k) binv(leave_row, k) *= inv_piv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave_row) continue;
                double f = w[i];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) binv(i, k) -= f * binv(leave_row, k);
            }
            if (iters_ % kRefactorEvery == 0) {
                if (!refactor()) return LpStatus::kSingular;
                recompute_basics();
            }
        }
    }

    void recompute_basics() {
        std::vector<double> r = b_;
        for (int j = 0; j < n_all_; ++j) {
            if (stat_[j] == VStat::kBasic || xval_[j] == 0.0) continue;
            for (auto [i, v] : cols_[j]) r[i] -= v * xval_[j];
        }
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += binv(i, k) * r[k];
            xval_[basis_[i]] = s;
        }
    }

    void finish(LpSolution& sol, LpStatus st) {
        sol.status = st;
        sol.iterations = iters_;
        if (st != LpStatus::kOptimal) {
            switch (st) {
                case LpStatus::kInfeasible: sol.message = "infeasible"; break;
                case LpStatus::kUnbounded: sol.message = "unbounded"; break;
                case LpStatus::kIterationLimit:
                    sol.message = "iteration limit (cycling guard engaged)";
                    break;
                case LpStatus::kSingular: sol.message = "numerically singular basis"; break;
                default: break;
            }
            return;
        }
        sol.x.assign(xval_.begin(), xval_.begin() + n_struct_);
        double sign = in_.maximize ? -1.0 : 1.0;
        double obj = 0.0;
        for (int j = 0; j < n_struct_; ++j) obj += in_.obj[j] * xval_[j];
        sol.objective = obj;

        std::vector<double> y = dual_y();
        sol.row_duals.resize(m_);
        for (int i = 0; i < m_; ++i) sol.row_duals[i] = sign * y[i];

        // certificate residuals: primal feasibility and dual sign violations
        double res = 0.0;
        std::vector<double> r = b_;
        for (int j = 0; j < n_art_begin_; ++j)
            for (auto [i, v] : cols_[j]) r[i] -= v * xval_[j];
        for (int i = 0; i < m_; ++i) res = std::max(res, std::abs(r[i]));
        for (int j = 0; j < n_art_begin_; ++j) {
            if (stat_[j] == VStat::kBasic) continue;
            double d = reduced_cost(j, y);
            if (stat_[j] == VStat::kAtLower && lo_[j] != up_[j]) res = std::max(res, -d);
            if (stat_[j] == VStat::kAtUpper && lo_[j] != up_[j]) res = std::max(res, d);
            if (stat_[j] == VStat::kFree) res = std::max(res, std::abs(d));
        }
        sol.cs_residual = std::max(0.0, res);
    }
};

}  // namespace detail

inline LpSolution solve_sparse_lp(const SparseLp& lp,
                                  const std::vector<int>* warm_basis = nullptr) {
    detail::Simplex s(lp);
    return s.solve(warm_basis);
}

// Dense front end. Dense LPs stay small (a few thousand variables); the heavy
// transportation oracles call solve_sparse_lp directly.
inline LpSolution lp_solve(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    SIRDRO_REQUIRE(lp.rows.size() == lp.senses.size() && lp.rows.size() == lp.rhs.size(),
                   "lp_solve: inconsistent row data");
    SIRDRO_REQUIRE(lp.lower.empty() || lp.lower.size() == n, "lp_solve: bad lower bounds");
    SIRDRO_REQUIRE(lp.upper.empty() || lp.upper.size() == n, "lp_solve: bad upper bounds");
    SparseLp s;
    s.maximize = lp.maximize;
    s.num_rows = static_cast<int>(lp.rows.size());
    s.senses = lp.senses;
    s.rhs = lp.rhs;
    s.obj = lp.objective;
    s.lower = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;
    s.upper = lp.upper.empty() ? std::vector<double>(n, kInf) : lp.upper;
    for (std::size_t j = 0; j < n; ++j)
        SIRDRO_REQUIRE(s.lower[j] <= s.upper[j], "lp_solve: lower bound exceeds upper bound");
    s.cols.resize(n);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        SIRDRO_REQUIRE(lp.rows[i].size() == n, "lp_solve: row dimension mismatch");
        for (std::size_t j = 0; j < n; ++j)
            if (lp.rows[i][j] != 0.0)
                s.cols[j].push_back({static_cast<int>(i), lp.rows[i][j]});
    }
    return solve_sparse_lp(s);
}

}  // namespace sirdro
