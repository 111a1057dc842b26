#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/wassdro/dual.hpp"

namespace sirdro {

namespace detail {

// The smoothed value function as a max of three affine functions of sbar:
//   A1 = qm (x - sbar + 1/2),  A2 = A1 + qp (sbar - x + 1/2),  A3 = qp (sbar - x + 1/2).
struct AffinePiece {
    double slope, intercept;
    double operator()(double s) const { return slope * s + intercept; }
};

inline std::array<AffinePiece, 3> vhat_pieces(double qp, double qm, double x) {
    AffinePiece a1{-qm, qm * (x + 0.5)};
    AffinePiece a3{qp, qp * (0.5 - x)};
    AffinePiece a2{a1.slope + a3.slope, a1.intercept + a3.intercept};
    return {a1, a2, a3};
}

// sup_sbar { a sbar + b - lambda |s - sbar|^p } in closed form; +inf when the
// slope beats the transport cost (only possible for p = 1).
inline double concave_piece_sup(const AffinePiece& piece, double lambda, double p, double s) {
    double a = piece.slope;
    if (p == 1.0) {
        if (std::abs(a) > lambda + 1e-12) return kInf;
        return piece(s);
    }
    if (lambda <= 0.0) return std::abs(a) > 0 ? kInf : piece(s);
    double step = std::pow(std::abs(a) / (lambda * p), 1.0 / (p - 1.0));
    double sbar = s + (a >= 0 ? step : -step);
    return piece(sbar) - lambda * std::pow(step, p);
}

// Separation subproblem sup_sbar { vhat(sbar, x) - lambda |s - sbar|^p }:
// the maximum of three concave maximization problems, each solved exactly.
struct SeparationResult {
    double value;
    double argmax;
};

inline SeparationResult separate_1d(double qp, double qm, double x, double lambda, double p,
                                    double s) {
    auto pieces = vhat_pieces(qp, qm, x);
    SeparationResult best{-kInf, s};
    for (const auto& piece : pieces) {
        double v = concave_piece_sup(piece, lambda, p, s);
        if (v > best.value) {
            best.value = v;
            if (p > 1.0 && lambda > 0.0) {
                double step = std::pow(std::abs(piece.slope) / (lambda * p), 1.0 / (p - 1.0));
                best.argmax = s + (piece.slope >= 0 ? step : -step);
            } else {
                best.argmax = s;
            }
        }
    }
    return best;
}

}  // namespace detail

// Row generation for the pragmatic Wasserstein DRSIR dual
//   inf_{lambda >= 0} { lambda eps^p + sum_k p_k nu(xi^k) },
//   nu(s) = sup_sbar { vhat(sbar, x) - lambda ||s - sbar||_p^p }.
// The inner sup is separable across dimensions and solved exactly per concave
// piece, so each candidate lambda is priced without residual violation; the
// outer convex objective is minimized by golden section with a widening retry
// if the optimum presses against the heuristic upper bound on lambda.
inline DualCertificate pragmatic_drsir_rowgen(const CostVector& q, const WassersteinBall& ball,
                                              const TenderPoint& x, double tol = 1e-6) {
    ball.validate();
    SIRDRO_REQUIRE(q.dim() == ball.reference.dim() && q.dim() == x.dim(),
                   "pragmatic_drsir_rowgen: dimension mismatch");
    SIRDRO_REQUIRE(ball.reference.all_discrete(),
                   "pragmatic_drsir_rowgen: reference marginals must be discrete");
    const double p = ball.p;
    const double qinf = q.inf_norm();

    auto nu_dim = [&](std::size_t i, double lambda, double s) {
        return detail::separate_1d(q.q[i].plus, q.q[i].minus, x.x[i], lambda, p, s).value;
    };
    auto phi = [&](double lambda) {
        double v = lambda * std::pow(ball.eps, p);
        for (std::size_t i = 0; i < q.dim(); ++i)
            for (const auto& a : ball.reference.marginal(i).atoms()) {
                double nv = nu_dim(i, lambda, a.loc);
                if (!std::isfinite(nv)) return kInf;
                v += a.mass * nv;
            }
        return v;
    };

    DualCertificate cert;
    if (ball.eps == 0.0) {
        // zero-radius ball: lambda is free; the objective is E[vhat]
        cert.lambda = qinf;
        cert.objective = 0.0;
        cert.nu.resize(q.dim());
        for (std::size_t i = 0; i < q.dim(); ++i)
            for (const auto& a : ball.reference.marginal(i).atoms()) {
                double nv = value_hat_1d(q.q[i].plus, q.q[i].minus, a.loc - x.x[i]);
                cert.nu[i].push_back(nv);
                cert.objective += a.mass * nv;
            }
        return cert;
    }

    double span = 0.0;
    for (std::size_t i = 0; i < q.dim(); ++i) {
        const auto& m = ball.reference.marginal(i);
        span = std::max(span, m.support_hi() - m.support_lo());
    }
    double diameter = span + 2.0 * (1.0 + std::pow(ball.eps, 1.0 / p));
    double lam_max = std::max(qinf, 1e-6) * (1.0 + std::pow(diameter, p - 1.0));

    const int kMaxWiden = 8;
    double best_lam = lam_max, best_val = kInf;
    int iters = 0;
    for (int attempt = 0; attempt < kMaxWiden; ++attempt) {
        // golden section on [0, lam_max]; phi is +inf left of the feasibility
        // threshold for p = 1, so the bracket is first shrunk to finite ground
        double lo = 0.0, hi = lam_max;
        if (!std::isfinite(phi(lo))) {
            double l = hi;
            for (int k = 0; k < 64 && std::isfinite(phi(l * 0.5)); ++k) l *= 0.5;
            lo = (p == 1.0) ? qinf : l * 0.25;  // p=1 threshold is exactly ||q||inf
        }
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = phi(x1), f2 = phi(x2);
        while (b - a > tol) {
            ++iters;
            if (!std::isfinite(f1)) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = phi(x2);
                continue;
            }
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = phi(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = phi(x2);
            }
            if (iters > 100000)
                throw Error("pragmatic_drsir_rowgen: no convergence in max iterations");
        }
        best_lam = 0.5 * (a + b);
        best_val = phi(best_lam);
        if (f1 < best_val) {
            best_lam = x1;
            best_val = f1;
        }
        if (std::isfinite(f2) && f2 < best_val) {
            best_lam = x2;
            best_val = f2;
        }
        if (best_lam < lam_max - 2.0 * tol * (1.0 + lam_max)) break;
        lam_max *= 4.0;  // optimum pressed the heuristic bound; widen and retry
    }
    SIRDRO_REQUIRE(std::isfinite(best_val),
                   "pragmatic_drsir_rowgen: dual objective stayed infinite (gap unresolved)");

    cert.lambda = best_lam;
    cert.objective = best_val;
    cert.iterations = iters;
    cert.nu.resize(q.dim());
    for (std::size_t i = 0; i < q.dim(); ++i)
        for (const auto& a : ball.reference.marginal(i).atoms())
            cert.nu[i].push_back(nu_dim(i, best_lam, a.loc));
    return cert;
}

}  // namespace sirdro
