#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sirdro/common.hpp"

namespace sirdro {

// Per-dimension surplus/shortage unit costs (q+, q-), both nonnegative.
struct CostVector {
    struct Pair {
        double plus;
        double minus;
    };
    std::vector<Pair> q;

    CostVector() = default;
    CostVector(std::initializer_list<Pair> init) : q(init) { validate(); }
    explicit CostVector(std::vector<Pair> init) : q(std::move(init)) { validate(); }
    static CostVector one_dim(double plus, double minus) { return CostVector({{plus, minus}}); }

    std::size_t dim() const { return q.size(); }

    void validate() const {
        SIRDRO_REQUIRE(!q.empty(), "cost vector: needs at least one dimension");
        for (const auto& p : q)
            SIRDRO_REQUIRE(p.plus >= 0.0 && p.minus >= 0.0,
                           "cost vector: unit costs must be nonnegative");
    }

    // max{q_i+, q_i-}
    double bar(std::size_t i) const { return std::max(q[i].plus, q[i].minus); }

    // ||q||_inf over all 2m entries
    double inf_norm() const {
        double v = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) v = std::max(v, bar(i));
        return v;
    }

    double sum_bar() const {
        double v = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) v += bar(i);
        return v;
    }

    // true when q_i+ + q_i- > 0 (the convexity lemma's nondegeneracy condition)
    bool nondegenerate(std::size_t i) const { return q[i].plus + q[i].minus > 0.0; }
};

struct TenderPoint {
    std::vector<double> x;
    TenderPoint() = default;
    TenderPoint(std::initializer_list<double> v) : x(v) {}
    explicit TenderPoint(std::vector<double> v) : x(std::move(v)) {}
    std::size_t dim() const { return x.size(); }
};

inline constexpr double kLatticeTol = 1e-9;

// One-dimensional second-stage value: q+ ceil(d)^+ + q- floor(d)^-, d = xi - x.
inline double value_1d(double qp, double qm, double d) {
    return qp * ceil_pos(d) + qm * floor_neg(d);
}

// Upper semi-continuous envelope; differs from value_1d only on the lattice d in Z,
// where it takes the largest of the value and the two one-sided limits.
inline double value_usc_1d(double qp, double qm, double d) {
    double kr = std::round(d);
    if (std::abs(d - kr) <= kLatticeTol) {
        double k = kr;
        double here = qp * pos(k) + qm * pos(-k);
        double right = qp * pos(k + 1.0) + qm * pos(-k);
        double left = qp * pos(k) + qm * pos(-(k - 1.0));
        return std::max(here, std::max(right, left));
    }
    return value_1d(qp, qm, d);
}

// Unit-average of the value function: q+ (d + 1/2)^+ + q- (d - 1/2)^-.
// Convex and piecewise affine, Lipschitz with constant max{q+, q-}.
inline double value_hat_1d(double qp, double qm, double d) {
    return qp * pos(d + 0.5) + qm * pos(-(d - 0.5));
}

// LP-relaxation value and the periodic integer-restriction surcharge.
inline double value_lp_1d(double qp, double qm, double d) {
    return qp * pos(d) + qm * pos(-d);
}
inline double psi_1d(double qp, double qm, double d) {
    return value_1d(qp, qm, d) - value_lp_1d(qp, qm, d);
}

namespace detail {
inline void check_dims(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    SIRDRO_REQUIRE(q.dim() == xi.size() && q.dim() == x.dim(),
                   "value: dimension mismatch between q, xi and x");
}
template <typename F>
double sum_dims(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x, F f) {
    check_dims(q, xi, x);
    double s = 0.0;
    for (std::size_t i = 0; i < q.dim(); ++i) s += f(q.q[i].plus, q.q[i].minus, xi[i] - x.x[i]);
    return s;
}
}  // namespace detail

inline double value(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    return detail::sum_dims(q, xi, x, value_1d);
}
inline double value_usc(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    return detail::sum_dims(q, xi, x, value_usc_1d);
}
inline double value_hat(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    return detail::sum_dims(q, xi, x, value_hat_1d);
}
inline double value_lp(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    return detail::sum_dims(q, xi, x, value_lp_1d);
}
inline double psi(const CostVector& q, const std::vector<double>& xi, const TenderPoint& x) {
    return detail::sum_dims(q, xi, x, psi_1d);
}

}  // namespace sirdro
