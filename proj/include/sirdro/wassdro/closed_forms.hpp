#pragma once

#include <algorithm>
#include <cmath>

#include "sirdro/common.hpp"
#include "sirdro/sir/expected_recourse.hpp"
#include "sirdro/wassdro/dual.hpp"

// Two convexifications of the Wasserstein ball exist: intersecting it with
// the set of unit-average laws, or pushing it forward through the unit
// average. Only the second is implemented here. The intersection variant
// leaves a function-valued multiplier in both the primal and the dual (a
// density-matching constraint for every point of the line), so no
// finite-dimensional reformulation is available even though the problem is
// convex.

namespace sirdro {

// Large-radius closed form of the standard Wasserstein DRSIR function:
//   Q_eps(x) = E[nu^{||q||inf}(xi, x)] + ||q||inf * eps,  p = 1.
// Hypothesis: eps >= sum_i ||q_i||inf / ||q||inf. (The source derivation's
// comparison of lambda = ||q||inf against larger lambda needs exactly this;
// verified against the transportation oracle.)
inline double standard_drsir_large_eps(const CostVector& q, const WassersteinBall& ball,
                                       const TenderPoint& x) {
    ball.validate();
    SIRDRO_REQUIRE(ball.p == 1.0, "standard_drsir_large_eps: closed form requires p = 1");
    SIRDRO_REQUIRE(q.dim() == ball.reference.dim() && q.dim() == x.dim(),
                   "standard_drsir_large_eps: dimension mismatch");
    double qinf = q.inf_norm();
    SIRDRO_REQUIRE(qinf > 0.0, "standard_drsir_large_eps: all costs are zero");
    SIRDRO_REQUIRE(ball.eps >= q.sum_bar() / qinf - 1e-12,
                   "standard_drsir_large_eps: radius below the closed-form threshold; "
                   "use worst_case_oracle instead");
    double total = qinf * ball.eps;
    for (std::size_t i = 0; i < q.dim(); ++i)
        total += expected_nu_lambda_1d(q.q[i].plus, q.q[i].minus, qinf,
                                       ball.reference.marginal(i), x.x[i]);
    return total;
}

// Pragmatic Wasserstein DRSIR closed form for p = 1:
//   Qhat_eps(x) = E[vhat(xi, x)] + ||q||inf * eps.
// Convex in x for every reference law and radius.
inline double pragmatic_drsir_p1(const CostVector& q, const WassersteinBall& ball,
                                 const TenderPoint& x) {
    ball.validate();
    SIRDRO_REQUIRE(ball.p == 1.0, "pragmatic_drsir_p1: closed form requires p = 1");
    return expected_recourse(q, ball.reference, x, RecourseVariant::kHat) +
           q.inf_norm() * ball.eps;
}

}  // namespace sirdro
