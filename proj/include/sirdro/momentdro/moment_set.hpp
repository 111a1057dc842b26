#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/numerics/polynomial.hpp"

namespace sirdro {

// One generalized moment condition E[g(xi_i)] = target for a marginal.
struct MomentFunctionSpec {
    enum class Kind { kPower, kAbsDeviation, kCustomPoly };

    Kind kind = Kind::kPower;
    int degree = 1;                // kPower: g(s) = s^degree
    double center = 0.0;           // kAbsDeviation: g(s) = |s - center|
    PiecewisePolynomial custom;    // kCustomPoly: degree <= 3, zero outside its support
    double target = 0.0;

    static MomentFunctionSpec mean(double m) {
        MomentFunctionSpec s;
        s.kind = Kind::kPower;
        s.degree = 1;
        s.target = m;
        return s;
    }
    static MomentFunctionSpec power(int deg, double m) {
        MomentFunctionSpec s;
        s.kind = Kind::kPower;
        s.degree = deg;
        s.target = m;
        return s;
    }
    static MomentFunctionSpec mad(double center, double m) {
        MomentFunctionSpec s;
        s.kind = Kind::kAbsDeviation;
        s.center = center;
        s.target = m;
        return s;
    }
    static MomentFunctionSpec poly(Polynomial p, double m) {
        MomentFunctionSpec s;
        s.kind = Kind::kCustomPoly;
        s.custom = PiecewisePolynomial({-kInf, kInf}, {std::move(p)});
        s.target = m;
        return s;
    }

    double g(double s) const {
        switch (kind) {
            case Kind::kPower: return std::pow(s, degree);
            case Kind::kAbsDeviation: return std::abs(s - center);
            case Kind::kCustomPoly: {
                if (custom.breaks.size() == 2 && std::isinf(custom.breaks.front()))
                    return custom.pieces.front()(s);
                return custom(s);
            }
        }
        return 0.0;
    }

    // Smoothed moment function: the unit average of g around s, in closed form.
    // Differentiable with derivative g(s + 1/2) - g(s - 1/2).
    double g_hat(double s) const { return hat_polynomial(s)(s); }

    // Interior kinks of g_hat (segment transitions).
    std::vector<double> hat_breakpoints() const {
        switch (kind) {
            case Kind::kPower: return {};
            case Kind::kAbsDeviation: return {center - 0.5, center + 0.5};
            case Kind::kCustomPoly: {
                std::vector<double> out;
                for (double b : custom.breaks) {
                    if (!std::isfinite(b)) continue;
                    out.push_back(b - 0.5);
                    out.push_back(b + 0.5);
                }
                return out;
            }
        }
        return {};
    }

    // Polynomial expression of g_hat valid on the breakpoint-free interval
    // containing `mid`.
    Polynomial hat_polynomial(double mid) const {
        switch (kind) {
            case Kind::kPower: {
                std::vector<double> mono(degree + 2, 0.0);
                mono[degree + 1] = 1.0 / double(degree + 1);
                Polynomial anti(std::move(mono));
                return anti.shifted(0.5) - anti.shifted(-0.5);
            }
            case Kind::kAbsDeviation: {
                double u = mid - center;
                if (u >= 0.5) return Polynomial({-center, 1.0});          // s - center
                if (u <= -0.5) return Polynomial({center, -1.0});         // center - s
                // (s - center)^2 + 1/4
                return Polynomial({center * center + 0.25, -2.0 * center, 1.0});
            }
            case Kind::kCustomPoly: {
                // antiderivative difference with zero extension outside support
                auto side = [&](double shift) -> Polynomial {
                    double point = mid + shift;
                    if (custom.empty()) return Polynomial();
                    if (std::isinf(custom.breaks.front())) {
                        Polynomial anti = custom.pieces.front().antiderivative();
                        return anti.shifted(shift);
                    }
                    PiecewisePolynomial C = custom.antiderivative(0.0);
                    if (point >= C.support_hi())
                        return Polynomial::constant(C.pieces.back()(C.support_hi()));
                    if (point <= C.support_lo()) return Polynomial();
                    return C.pieces[C.segment_index(point)].shifted(shift);
                };
                return side(0.5) - side(-0.5);
            }
        }
        return Polynomial();
    }
};

// Per-dimension moment conditions plus a bounded support for the pre-smoothing
// law; the bound keeps the dual bounded and the separation exact.
struct MomentAmbiguitySet {
    struct Dimension {
        double lo = 0.0, hi = 0.0;  // support bounds [L, U]
        std::vector<MomentFunctionSpec> specs;
    };
    std::vector<Dimension> dims;

    std::size_t dim() const { return dims.size(); }

    void validate() const {
        SIRDRO_REQUIRE(!dims.empty(), "moment set: needs at least one dimension");
        for (const auto& d : dims)
            SIRDRO_REQUIRE(d.lo < d.hi, "moment set: support requires L < U");
    }
};

}  // namespace sirdro
