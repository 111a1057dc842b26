// Single-sample newsvendor walkthrough: fitting the first stage to one
// observation lands on a cost jump; the smoothed objective and the
// distributionally robust objective both move the order away from it.

#include <cstdio>

#include "sirdro/sir/first_stage.hpp"
#include "sirdro/wassdro/closed_forms.hpp"
#include "sirdro/wassdro/oracle.hpp"

using namespace sirdro;

int main() {
    const double a = 1.0;        // the one observed demand
    const double c = 1.0;        // unit order cost
    CostVector q = CostVector::one_dim(2.0, 0.0);  // shortage costs twice the order

    ProductDistribution sample({Distribution1D::point(a)});
    FirstStageProblem prob;
    prob.c = {c};
    prob.box = {{a - 3.0, a + 3.0}};

    FirstStageSolution naive = solve_first_stage(prob, q, sample, FirstStageVariant::kExactGrid);
    FirstStageSolution smoothed = solve_first_stage(prob, q, sample, FirstStageVariant::kHat);

    std::printf("observed demand a = %.2f, order cost c = %.2f, shortage cost q+ = %.2f\n\n", a,
                c, q.q[0].plus);
    std::printf("naive (empirical) order:    x = %.4f  objective = %.4f\n", naive.x.x[0],
                naive.objective);
    std::printf("smoothed-objective order:   x = %.4f  objective = %.4f\n", smoothed.x.x[0],
                smoothed.objective);

    // out-of-sample stress: demand uniform on (a - 1/2, a + 1/2)
    ProductDistribution stress({Distribution1D::uniform(a - 0.5, a + 0.5)});
    auto stressed = [&](double x) {
        return c * x + expected_recourse(q, stress, TenderPoint{x}, RecourseVariant::kExact);
    };
    std::printf("\nunder a true demand U(a-1/2, a+1/2):\n");
    std::printf("naive order costs %.4f, smoothed order costs %.4f\n", stressed(naive.x.x[0]),
                stressed(smoothed.x.x[0]));

    // robust order with a transport budget of 1 around the sample
    WassersteinBall ball{sample, 1.0, 1.0};
    double best_x = 0.0, best_v = kInf;
    for (const auto& atom : sample.marginal(0).atoms()) {
        double xx = atom.loc + 1.0;  // kink of the large-radius objective
        double v = c * xx + standard_drsir_large_eps(q, ball, TenderPoint{xx});
        if (v < best_v) {
            best_v = v;
            best_x = xx;
        }
    }
    std::printf("\nrobust order (radius 1):    x = %.4f  worst-case objective = %.4f\n", best_x,
                best_v);
    OracleResult worst = worst_case_oracle(q, ball, TenderPoint{best_x});
    std::printf("transportation-oracle check of the worst case: %.4f\n",
                c * best_x + worst.value);
    return 0;
}
