#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/numerics/polynomial.hpp"

namespace sirdro {

struct Atom {
    double loc;
    double mass;
};

// One-dimensional probability measure: point masses plus a piecewise-polynomial
// density part. Total mass must be 1. The family is closed under the unit
// moving-average transform (degree goes up by one, capped at 4) and under
// cell-averaging, which is all the library ever needs.
class Distribution1D {
public:
    static constexpr double kMassTol = 1e-10;
    static constexpr double kLocTol = 1e-12;  // atom dedup tolerance

    Distribution1D() = default;

    static Distribution1D point(double loc) { return Distribution1D({{loc, 1.0}}, {}); }

    static Distribution1D discrete(std::vector<Atom> atoms) {
        return Distribution1D(std::move(atoms), {});
    }

    static Distribution1D continuous(PiecewisePolynomial density) {
        return Distribution1D({}, std::move(density));
    }

    static Distribution1D uniform(double a, double b) {
        SIRDRO_REQUIRE(a < b, "uniform: requires a < b");
        return continuous(PiecewisePolynomial({a, b}, {Polynomial::constant(1.0 / (b - a))}));
    }

    Distribution1D(std::vector<Atom> atoms, PiecewisePolynomial density)
        : atoms_(std::move(atoms)), density_(std::move(density)) {
        normalize_atoms();
        validate();
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const PiecewisePolynomial& density() const { return density_; }
    bool has_density() const { return !density_.empty(); }
    bool is_discrete() const { return density_.empty(); }

    double atom_mass() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.mass;
        return s;
    }

    // smallest/largest point carrying mass
    double support_lo() const {
        double lo = kInf;
        if (!atoms_.empty()) lo = atoms_.front().loc;
        if (has_density()) lo = std::min(lo, density_.support_lo());
        return lo;
    }
    double support_hi() const {
        double hi = -kInf;
        if (!atoms_.empty()) hi = atoms_.back().loc;
        if (has_density()) hi = std::max(hi, density_.support_hi());
        return hi;
    }

    // Right-continuous cdf: P(xi <= s).
    double cdf(double s) const {
        double v = 0.0;
        for (const auto& a : atoms_) {
            if (a.loc <= s) v += a.mass;
            else break;
        }
        if (has_density()) v += density_.integrate(density_.support_lo(), std::max(s, density_.support_lo()));
        return std::min(v, 1.0);
    }

    // Left limit of the cdf: P(xi < s).
    double cdf_left(double s) const {
        double v = 0.0;
        for (const auto& a : atoms_) {
            if (a.loc < s - kLocTol) v += a.mass;
            else break;
        }
        if (has_density())
            v += density_.integrate(density_.support_lo(), std::max(s, density_.support_lo()));
        return std::min(v, 1.0);
    }

    // Generalized inverse cdf: inf{ s : F(s) >= u }, by bisection.
    double quantile(double u, double tol = 1e-10) const {
        SIRDRO_REQUIRE(u >= 0.0 && u <= 1.0, "quantile: u must lie in [0,1]");
        double lo = support_lo(), hi = support_hi();
        if (u <= 0.0) return lo;
        if (cdf(lo) >= u) return lo;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (cdf(mid) >= u) hi = mid;
            else lo = mid;
        }
        return hi;
    }

    double mean() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.loc * a.mass;
        if (has_density()) s += density_.first_moment();
        return s;
    }

    // E[g(xi)] for g given as a plain callable, with the density part integrated
    // by splitting at the given extra breakpoints (g must be polynomial-friendly
    // between them). Used by tests; production paths use the exact routines in
    // expected_recourse.hpp.
    template <typename G>
    double expectation_sampled(G&& g, int samples_per_segment = 512) const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.mass * g(a.loc);
        if (has_density()) {
            for (std::size_t i = 0; i < density_.pieces.size(); ++i) {
                double a = density_.breaks[i], b = density_.breaks[i + 1];
                double h = (b - a) / samples_per_segment;
                double acc = 0.0;
                for (int k = 0; k < samples_per_segment; ++k) {
                    double t = a + (k + 0.5) * h;
                    acc += g(t) * density_(t);
                }
                s += acc * h;
            }
        }
        return s;
    }

    // Mass inside [a, b) with the left-closed convention used for cells.
    double mass_in_left_closed(double a, double b) const {
        double v = 0.0;
        for (const auto& at : atoms_)
            if (at.loc >= a - kLocTol && at.loc < b - kLocTol) v += at.mass;
        if (has_density()) v += density_.integrate(a, b);
        return v;
    }

private:
    std::vector<Atom> atoms_;
    PiecewisePolynomial density_;

    void normalize_atoms() {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
        std::vector<Atom> merged;
        for (const auto& a : atoms_) {
            SIRDRO_REQUIRE(a.mass > 0.0, "distribution: atom masses must be positive");
            if (!merged.empty() && a.loc - merged.back().loc <= kLocTol)
                merged.back().mass += a.mass;
            else
                merged.push_back(a);
        }
        atoms_ = std::move(merged);
    }

    void validate() const {
        double total = atom_mass();
        if (has_density()) {
            total += density_.integrate_all();
            for (std::size_t i = 0; i < density_.pieces.size(); ++i) {
                double a = density_.breaks[i], b = density_.breaks[i + 1];
                if (std::isinf(a) || std::isinf(b)) {
                    SIRDRO_REQUIRE(density_.pieces[i].is_zero(),
                                   "distribution: nonzero density on infinite segment");
                    continue;
                }
                for (int k = 0; k <= 8; ++k) {
                    double t = a + (b - a) * k / 8.0;
                    SIRDRO_REQUIRE(density_.pieces[i](t) >= -1e-9,
                                   "distribution: density must be nonnegative");
                }
            }
        }
        SIRDRO_REQUIRE(std::abs(total - 1.0) <= kMassTol,
                       "distribution: total mass must equal 1");
    }
};

// The unit-interval moving-average transform applied to a distribution:
// the output is continuous with density f(t) = F(t + 1/2) - F(t - 1/2).
// Raises the density degree by one; input degree must be <= 3.
inline Distribution1D gamma_transform(const Distribution1D& d) {
    SIRDRO_REQUIRE(d.density().max_degree() <= 3,
                   "gamma_transform: density degree would exceed the cap of 4");

    // Antiderivative C of the density part (continuous, zero left of support).
    PiecewisePolynomial C;
    if (d.has_density()) C = d.density().antiderivative(0.0);

    std::vector<double> cuts;
    for (const auto& a : d.atoms()) {
        cuts.push_back(a.loc - 0.5);
        cuts.push_back(a.loc + 0.5);
    }
    for (double b : d.density().breaks) {
        cuts.push_back(b - 0.5);
        cuts.push_back(b + 0.5);
    }

    auto cdf_poly_at = [&](double t, double shift) -> Polynomial {
        // polynomial in t equal to F(t + shift) on the current segment,
        // F = atom steps + density antiderivative
        double point = t + shift;
        double step = 0.0;
        for (const auto& a : d.atoms())
            if (a.loc <= point) step += a.mass;
        Polynomial p = Polynomial::constant(step);
        if (!C.empty()) {
            if (point >= C.support_hi())
                p += Polynomial::constant(C.pieces.back()(C.support_hi()));
            else if (point > C.support_lo()) {
                int i = C.segment_index(point);
                p += C.pieces[i].shifted(shift);
            }
        }
        return p;
    };

    PiecewisePolynomial f = build_piecewise(cuts, [&](double mid) {
        Polynomial hi = cdf_poly_at(mid, +0.5);
        Polynomial lo = cdf_poly_at(mid, -0.5);
        Polynomial p = hi - lo;
        p.trim(1e-15);
        return p;
    });
    f = trim_zero_tails(f, 1e-15);
    return Distribution1D::continuous(std::move(f));
}

// Cell-averaging transform: the mass of each cell [alpha + k, alpha + k + 1)
// is spread uniformly over that cell. Produces the alpha-approximation
// distribution; cell-uniform inputs are fixed points.
inline Distribution1D gamma_alpha_transform(const Distribution1D& d, double alpha) {
    SIRDRO_REQUIRE(d.density().max_degree() <= 3,
                   "gamma_alpha_transform: density degree exceeds the supported cap");
    double lo = d.support_lo(), hi = d.support_hi();
    long k_lo = static_cast<long>(std::floor(lo - alpha));
    long k_hi = static_cast<long>(std::floor(hi - alpha + Distribution1D::kLocTol));
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    for (long k = k_lo; k <= k_hi; ++k) {
        double a = alpha + double(k);
        double m = d.mass_in_left_closed(a, a + 1.0);
        if (breaks.empty()) breaks.push_back(a);
        breaks.push_back(a + 1.0);
        pieces.push_back(Polynomial::constant(m));
    }
    PiecewisePolynomial f(std::move(breaks), std::move(pieces));
    return Distribution1D::continuous(trim_zero_tails(f, 0.0));
}

}  // namespace sirdro
