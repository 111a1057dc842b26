#pragma once

#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/distribution1d.hpp"

namespace sirdro {

// Normal(mu, sigma) truncated to +-8 sigma, represented as a renormalized
// cubic spline fit of the pdf on 64 segments (four-point interpolation per
// segment). Truncation discards < 1e-14 mass, so the closed-form integration
// pipeline applies with negligible error.
inline Distribution1D make_truncated_normal(double mu = 0.0, double sigma = 1.0,
                                            int segments = 64, double half_width_sigmas = 8.0) {
    SIRDRO_REQUIRE(sigma > 0.0, "make_truncated_normal: sigma must be positive");
    const double lo = mu - half_width_sigmas * sigma, hi = mu + half_width_sigmas * sigma;
    auto pdf = [&](double t) {
        double z = (t - mu) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
    };
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    const double h = (hi - lo) / segments;
    for (int i = 0; i < segments; ++i) {
        double a = lo + i * h, b = a + h;
        // cubic through four equally spaced nodes
        double t0 = a, t1 = a + h / 3.0, t2 = a + 2.0 * h / 3.0, t3 = b;
        double y0 = pdf(t0), y1 = pdf(t1), y2 = pdf(t2), y3 = pdf(t3);
        // Lagrange basis expansion
        auto basis = [&](double ta, double tb, double tc, double td) {
            // (t - tb)(t - tc)(t - td) / ((ta-tb)(ta-tc)(ta-td))
            Polynomial p({1.0});
            for (double r : {tb, tc, td}) p = p * Polynomial({-r, 1.0});
            double denom = (ta - tb) * (ta - tc) * (ta - td);
            return p * (1.0 / denom);
        };
        Polynomial piece = basis(t0, t1, t2, t3) * y0 + basis(t1, t0, t2, t3) * y1 +
                           basis(t2, t0, t1, t3) * y2 + basis(t3, t0, t1, t2) * y3;
        if (breaks.empty()) breaks.push_back(a);
        breaks.push_back(b);
        pieces.push_back(piece);
    }
    PiecewisePolynomial f(std::move(breaks), std::move(pieces));
    double mass = f.integrate_all();
    for (auto& p : f.pieces) p = p * (1.0 / mass);
    return Distribution1D::continuous(std::move(f));
}

// The oscillating uniform family: density 2 on the even dyadic subcells of
// (0, 1) at level n. Its cell mass within [0,1) is 1, so the alpha = 0 cell
// average is U(0,1); the Wasserstein distance to it shrinks like 2^-(n+1)
// while the total variation grows like 2^(n+1).
inline Distribution1D make_dyadic_uniform(int n) {
    SIRDRO_REQUIRE(n >= 1 && n <= 20, "make_dyadic_uniform: level out of range");
    const double w = std::ldexp(1.0, -n);  // 2^-n
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    const long pairs = 1L << (n - 1);
    breaks.push_back(0.0);
    for (long k = 0; k < pairs; ++k) {
        double a = 2.0 * k * w;
        breaks.push_back(a + w);
        pieces.push_back(Polynomial::constant(2.0));
        breaks.push_back(a + 2.0 * w);
        pieces.push_back(Polynomial::constant(0.0));
    }
    return Distribution1D::continuous(PiecewisePolynomial(std::move(breaks), std::move(pieces)));
}

}  // namespace sirdro
