#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sirdro/common.hpp"

namespace sirdro {

// Dense polynomial in the absolute coordinate: p(t) = c[0] + c[1] t + ... + c[d] t^d.
// Degrees stay small (<= 4) everywhere in this library, so the quadratic-cost
// helpers below are fine.
struct Polynomial {
    std::vector<double> coeffs;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) { trim(); }

    static Polynomial constant(double v) { return Polynomial({v}); }

    int degree() const { return coeffs.empty() ? -1 : static_cast<int>(coeffs.size()) - 1; }

    double operator()(double t) const {
        double r = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) r = r * t + coeffs[i];
        return r;
    }

    void trim(double tol = 0.0) {
        while (!coeffs.empty() && std::abs(coeffs.back()) <= tol) coeffs.pop_back();
    }

    bool is_zero(double tol = 0.0) const {
        for (double c : coeffs)
            if (std::abs(c) > tol) return false;
        return true;
    }

    Polynomial antiderivative() const {
        std::vector<double> r(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) r[i + 1] = coeffs[i] / double(i + 1);
        return Polynomial(std::move(r));
    }

    Polynomial derivative() const {
        if (coeffs.size() <= 1) return Polynomial();
        std::vector<double> r(coeffs.size() - 1);
        for (std::size_t i = 1; i < coeffs.size(); ++i) r[i - 1] = coeffs[i] * double(i);
        return Polynomial(std::move(r));
    }

    // p(t + c) expanded in t, via binomial expansion of each monomial
    Polynomial shifted(double c) const {
        std::vector<double> r(coeffs.size(), 0.0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            double ck = coeffs[k];
            if (ck == 0.0) continue;
            std::vector<double> pow_c(k + 1, 1.0);
            for (std::size_t j = 1; j <= k; ++j) pow_c[j] = pow_c[j - 1] * c;
            for (std::size_t j = 0; j <= k; ++j) {
                double comb = 1.0;  // C(k, j)
                for (std::size_t t = 0; t < j; ++t) comb = comb * double(k - t) / double(t + 1);
                r[j] += ck * comb * pow_c[k - j];
            }
        }
        return Polynomial(std::move(r));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), 0.0);
        for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), 0.0);
        for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, double s) {
        Polynomial r = a;
        for (double& c : r.coeffs) c *= s;
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.coeffs.empty() || b.coeffs.empty()) return Polynomial();
        std::vector<double> r(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs.size(); ++j)
                r[i + j] += a.coeffs[i] * b.coeffs[j];
        return Polynomial(std::move(r));
    }

    // definite integral over [a, b]
    double integral(double a, double b) const {
        Polynomial F = antiderivative();
        return F(b) - F(a);
    }

    // All real roots inside [a, b], found by sign-change scanning plus bisection.
    // Adequate for the low degrees used here; `samples` controls the initial scan.
    std::vector<double> roots_in(double a, double b, double tol = 1e-12,
                                 int samples = 64) const {
        std::vector<double> out;
        if (degree() <= 0 || b <= a) return out;
        if (degree() == 1) {
            double r = -coeffs[0] / coeffs[1];
            if (r >= a - tol && r <= b + tol) out.push_back(std::clamp(r, a, b));
            return out;
        }
        const double h = (b - a) / samples;
        double t0 = a, f0 = (*this)(a);
        for (int i = 1; i <= samples; ++i) {
            double t1 = (i == samples) ? b : a + i * h;
            double f1 = (*this)(t1);
            if (f0 == 0.0) out.push_back(t0);
            if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
                double lo = t0, hi = t1, flo = f0;
                for (int it = 0; it < 200 && hi - lo > tol; ++it) {
                    double mid = 0.5 * (lo + hi), fm = (*this)(mid);
                    if (fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((flo < 0) == (fm < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                out.push_back(0.5 * (lo + hi));
            }
            t0 = t1;
            f0 = f1;
        }
        if (f0 == 0.0) out.push_back(b);
        return out;
    }
};

// Piecewise polynomial on consecutive segments [breaks[i], breaks[i+1]).
// Value at a breakpoint is taken from the right segment (left-closed convention).
// End breakpoints may be +-inf sentinels.
struct PiecewisePolynomial {
    std::vector<double> breaks;       // strictly increasing, size = segments + 1
    std::vector<Polynomial> pieces;   // one polynomial per segment

    static constexpr double kBreakTol = 1e-12;  // dedup tolerance for breakpoints

    PiecewisePolynomial() = default;
    PiecewisePolynomial(std::vector<double> b, std::vector<Polynomial> p)
        : breaks(std::move(b)), pieces(std::move(p)) {
        SIRDRO_REQUIRE(breaks.size() == pieces.size() + 1,
                       "piecewise polynomial: segment count must be breakpoints - 1");
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            SIRDRO_REQUIRE(breaks[i] < breaks[i + 1],
                           "piecewise polynomial: breakpoints must be strictly increasing");
    }

    bool empty() const { return pieces.empty(); }
    double support_lo() const { return breaks.empty() ? 0.0 : breaks.front(); }
    double support_hi() const { return breaks.empty() ? 0.0 : breaks.back(); }

    int max_degree() const {
        int d = -1;
        for (const auto& p : pieces) d = std::max(d, p.degree());
        return d;
    }

    // Index of the segment containing t (left-closed), or -1 outside the support.
    int segment_index(double t) const {
        if (empty() || t < breaks.front() || t >= breaks.back()) return -1;
        auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
        return static_cast<int>(it - breaks.begin()) - 1;
    }

    double operator()(double t) const {
        int i = segment_index(t);
        return i < 0 ? 0.0 : pieces[i](t);
    }

    // Exact integral of the piecewise polynomial over [a, b] (zero outside support).
    double integrate(double a, double b) const {
        SIRDRO_REQUIRE(a <= b, "poly_integrate: requires a <= b");
        if (empty()) return 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double lo = std::max(a, breaks[i]);
            double hi = std::min(b, breaks[i + 1]);
            if (lo >= hi) continue;
            if (std::isinf(lo) || std::isinf(hi)) {
                SIRDRO_REQUIRE(pieces[i].is_zero(),
                               "poly_integrate: unbounded integral over infinite segment");
                continue;
            }
            total += pieces[i].integral(lo, hi);
        }
        return total;
    }

    double integrate_all() const { return integrate(support_lo(), support_hi()); }

    // Integral of t * f(t) over the full support (first moment when f is a density).
    double first_moment() const {
        double total = 0.0;
        Polynomial t({0.0, 1.0});
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].is_zero()) continue;
            SIRDRO_REQUIRE(!std::isinf(breaks[i]) && !std::isinf(breaks[i + 1]),
                           "first_moment: unbounded support with nonzero density");
            total += (pieces[i] * t).integral(breaks[i], breaks[i + 1]);
        }
        return total;
    }

    // Piecewise antiderivative F with F(support_lo) = base; continuous across segments.
    // Only valid for finite supports.
    PiecewisePolynomial antiderivative(double base = 0.0) const {
        std::vector<Polynomial> out;
        out.reserve(pieces.size());
        double acc = base;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            Polynomial F = pieces[i].antiderivative();
            Polynomial piece = F;
            piece += Polynomial::constant(acc - F(breaks[i]));
            out.push_back(piece);
            acc = piece(breaks[i + 1]);
        }
        return PiecewisePolynomial(breaks, std::move(out));
    }

    // Restrict/extend the evaluation of this function as a plain callable.
    double value_or(double t, double fallback) const {
        int i = segment_index(t);
        return i < 0 ? fallback : pieces[i](t);
    }
};

// Builds a piecewise polynomial from (possibly duplicated, unsorted) candidate
// breakpoints and a piece factory called with each segment's midpoint.
template <typename PieceFn>
PiecewisePolynomial build_piecewise(std::vector<double> candidate_breaks, PieceFn&& piece_at) {
    std::sort(candidate_breaks.begin(), candidate_breaks.end());
    std::vector<double> b;
    for (double t : candidate_breaks)
        if (b.empty() || t - b.back() > PiecewisePolynomial::kBreakTol) b.push_back(t);
    if (b.size() < 2) return {};
    std::vector<Polynomial> pieces;
    pieces.reserve(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        pieces.push_back(piece_at(0.5 * (b[i] + b[i + 1])));
    return PiecewisePolynomial(std::move(b), std::move(pieces));
}

// Drops leading/trailing segments that are identically zero.
inline PiecewisePolynomial trim_zero_tails(const PiecewisePolynomial& f, double tol = 0.0) {
    if (f.empty()) return f;
    std::size_t lo = 0, hi = f.pieces.size();
    while (lo < hi && f.pieces[lo].is_zero(tol)) ++lo;
    while (hi > lo && f.pieces[hi - 1].is_zero(tol)) --hi;
    if (lo >= hi) return {};
    std::vector<double> b(f.breaks.begin() + lo, f.breaks.begin() + hi + 1);
    std::vector<Polynomial> p(f.pieces.begin() + lo, f.pieces.begin() + hi);
    return PiecewisePolynomial(std::move(b), std::move(p));
}

}  // namespace sirdro
