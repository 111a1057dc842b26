#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirdro/bounds/bounds.hpp"
#include "sirdro/bounds/families.hpp"
#include "sirdro/wassdro/oracle.hpp"

using namespace sirdro;

namespace {
std::mt19937_64 rng(271828);
}

TEST_CASE("one-dimensional stability bound") {
    CHECK(bound_g(2.0, 0.5) == Catch::Approx(2.0));
    CHECK(bound_g(2.0, 0.0) == Catch::Approx(0.0));
    CHECK(bound_g(2.0, 1.0) == Catch::Approx(3.0));
    // continuity at the branch point and concavity-ish monotonicity
    CHECK(bound_g(1.7, 0.5 - 1e-12) == Catch::Approx(bound_g(1.7, 0.5 + 1e-12)).margin(1e-9));
    double prev = 0.0;
    for (double e = 0.0; e <= 2.0; e += 0.01) {
        double v = bound_g(1.3, e);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("multi-dimensional stability bound") {
    CHECK(bound_G({2.0}, 0.3) == Catch::Approx(2.0 * std::sqrt(0.6)));
    CHECK(bound_G({2.0}, 0.3) == Catch::Approx(bound_g(2.0, 0.3)));
    CHECK(bound_G({3.0, 4.0}, 0.5) == Catch::Approx(5.0));
    CHECK(bound_G({3.0, 4.0}, 1.0) == Catch::Approx(7.125));
    // continuity at eps_bar
    double eb = 0.5 * (25.0 / 16.0);
    CHECK(bound_G({3.0, 4.0}, eb - 1e-12) ==
          Catch::Approx(bound_G({3.0, 4.0}, eb + 1e-12)).margin(1e-9));
}

TEST_CASE("standard-vs-pragmatic gap function") {
    CHECK(bound_G_star({2.0}, 0.0) == Catch::Approx(0.0));
    CHECK(bound_G_star({2.0}, 0.5) == Catch::Approx(1.0));
    CHECK(bound_G_star({2.0}, 3.0) == Catch::Approx(1.0));  // constant ||q||inf/2 beyond
    for (double e = 0.0; e <= 3.0; e += 0.05) CHECK(bound_G_star({1.5, 0.7}, e) >= -1e-12);
}

TEST_CASE("total-variation kernel and bound") {
    CHECK(bound_H(4.0) == Catch::Approx(0.5));
    CHECK(bound_H(4.0 - 1e-12) == Catch::Approx(bound_H(4.0 + 1e-12)).margin(1e-9));
    CHECK(bound_H(kInf) == Catch::Approx(1.0));
    double tvn = 2.0 / std::sqrt(2.0 * M_PI);
    CHECK(bound_H_tv({1.0}, {tvn}) == Catch::Approx(0.0997).margin(5e-4));
    CHECK(bound_H_tv({1.0}, {kInf}) == Catch::Approx(1.0));
}

TEST_CASE("total variation of simple densities") {
    CHECK(total_variation(Distribution1D::uniform(0.0, 1.0)) == Catch::Approx(2.0));
    Distribution1D norm = make_truncated_normal();
    CHECK(total_variation(norm) == Catch::Approx(2.0 / std::sqrt(2.0 * M_PI)).margin(1e-4));
    CHECK(std::isinf(total_variation(Distribution1D::point(0.0))));
    // dyadic family: TV doubles with each level
    for (int n = 1; n <= 6; ++n)
        CHECK(total_variation(make_dyadic_uniform(n)) == Catch::Approx(std::ldexp(2.0, n)));
}

TEST_CASE("truncated normal is a faithful density") {
    Distribution1D norm = make_truncated_normal();
    CHECK(norm.density().integrate_all() == Catch::Approx(1.0).margin(1e-12));
    CHECK(norm.density()(0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * M_PI)).margin(1e-6));
    CHECK(norm.mean() == Catch::Approx(0.0).margin(1e-12));
    CHECK(norm.cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-5));
}

TEST_CASE("normal-distribution bound comparison") {
    ProductDistribution P({make_truncated_normal()});
    CostVector q = CostVector::one_dim(1.0, 0.0);
    BoundReport rep = error_bound_convex_approx(q, P, ConvexApprox::kAlpha, {0.0});
    CHECK(rep.wasserstein_distance == Catch::Approx(0.0677).margin(1e-3));
    CHECK(rep.bound_wasserstein >= 0.35);
    CHECK(rep.bound_wasserstein <= 0.39);
    REQUIRE(rep.bound_tv.has_value());
    CHECK(*rep.bound_tv >= 0.095);
    CHECK(*rep.bound_tv <= 0.105);
}

TEST_CASE("cell-uniform laws have zero approximation error") {
    ProductDistribution P({Distribution1D::uniform(0.0, 1.0)});
    CostVector q = CostVector::one_dim(2.0, 0.0);
    BoundReport rep = error_bound_convex_approx(q, P, ConvexApprox::kAlpha, {0.0}, true);
    CHECK(rep.wasserstein_distance == Catch::Approx(0.0).margin(1e-10));
    CHECK(rep.bound_wasserstein == Catch::Approx(0.0).margin(1e-5));
    REQUIRE(rep.empirical_gap.has_value());
    CHECK(*rep.empirical_gap == Catch::Approx(0.0).margin(1e-9));
    // while the TV route still charges q+/4 for U(0,1)
    CHECK(*rep.bound_tv == Catch::Approx(0.5));
}

TEST_CASE("point-mass shifted relaxation bound") {
    ProductDistribution P({Distribution1D::point(1.0)});
    CostVector q = CostVector::one_dim(1.0, 0.0);
    BoundReport rep = error_bound_convex_approx(q, P, ConvexApprox::kShiftedLp);
    CHECK(rep.wasserstein_distance == Catch::Approx(0.25).margin(1e-10));
    CHECK(rep.bound_wasserstein == Catch::Approx(std::sqrt(0.5)).margin(1e-9));
}

TEST_CASE("empirical gap never exceeds the bound") {
    std::uniform_real_distribution<double> loc(-2.0, 2.0);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + int(rng() % 4);
        std::vector<Atom> atoms;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            atoms.push_back({loc(rng), w(rng)});
            total += atoms.back().mass;
        }
        for (auto& a : atoms) a.mass /= total;
        ProductDistribution P({Distribution1D::discrete(atoms)});
        CostVector q = CostVector::one_dim(1.5, 0.5);
        BoundReport rep = error_bound_convex_approx(q, P, ConvexApprox::kShiftedLp, {}, true);
        REQUIRE(rep.empirical_gap.has_value());
        CHECK(*rep.empirical_gap <= rep.bound_wasserstein + 1e-6);
    }
}

TEST_CASE("dyadic family: transport error shrinks while variation blows up") {
    double prev_w = kInf;
    for (int n = 1; n <= 8; ++n) {
        Distribution1D P = make_dyadic_uniform(n);
        Distribution1D Pa = gamma_alpha_transform(P, 0.0);
        double w1 = wasserstein_1d(P, Pa, 1.0);
        CHECK(w1 == Catch::Approx(std::ldexp(1.0, -n - 1)).margin(1e-9));
        CHECK(w1 < prev_w);
        prev_w = w1;
    }
    // crossover: the transport bound beats the variation bound for deep levels
    Distribution1D P8 = make_dyadic_uniform(8);
    CostVector q = CostVector::one_dim(1.0, 0.0);
    BoundReport rep =
        error_bound_convex_approx(q, ProductDistribution({P8}), ConvexApprox::kAlpha, {0.0});
    CHECK(rep.bound_wasserstein < *rep.bound_tv);
}

TEST_CASE("stability bound holds against the transportation oracle") {
    // reference in the convexifying family: unit-average of random discrete laws
    std::uniform_real_distribution<double> loc(-1.5, 1.5);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    std::uniform_real_distribution<double> xd(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        int n = 1 + int(rng() % 3);
        std::vector<Atom> atoms;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            atoms.push_back({loc(rng), w(rng)});
            total += atoms.back().mass;
        }
        for (auto& a : atoms) a.mass /= total;
        // discretize the unit-average finely so the oracle applies
        Distribution1D smooth = gamma_transform(Distribution1D::discrete(atoms));
        std::vector<Atom> grid_atoms;
        const int cells = 400;
        double lo = smooth.support_lo(), hi = smooth.support_hi();
        for (int k = 0; k < cells; ++k) {
            double a = lo + (hi - lo) * k / cells, b = lo + (hi - lo) * (k + 1) / cells;
            double m = smooth.density().integrate(a, b);
            if (m > 1e-14) grid_atoms.push_back({0.5 * (a + b), m});
        }
        double total_m = 0.0;
        for (auto& g : grid_atoms) total_m += g.mass;
        for (auto& g : grid_atoms) g.mass /= total_m;
        Distribution1D discretized = Distribution1D::discrete(grid_atoms);
        ProductDistribution Pd({discretized});
        TenderPoint x{xd(rng)};
        // the oracle works on the discretized reference; its worst law is then
        // scored exactly against the true smooth reference, whose ball is
        // larger by the (computed) discretization distance
        double delta = wasserstein_1d(discretized, smooth, 1.0);
        for (double eps : {0.05, 0.25}) {
            WassersteinBall ball{Pd, 1.0, eps};
            // sup side, two-sided costs
            CostVector q = CostVector::one_dim(2.0, 1.0);
            double base = expected_recourse(q, ProductDistribution({smooth}), x,
                                            RecourseVariant::kExact);
            OracleResult up = worst_case_oracle(q, ball, x);
            double q_up = 0.0;
            for (const auto& pt : up.worst.points)
                q_up += pt.mass * value_usc_1d(2.0, 1.0, pt.s[0] - x.x[0]);
            CHECK(q_up - base <= bound_g(2.0, eps + delta) + 1e-6);
            // inf side with one-sided costs, where the same constant applies
            CostVector q1 = CostVector::one_dim(2.0, 0.0);
            double base1 = expected_recourse(q1, ProductDistribution({smooth}), x,
                                             RecourseVariant::kExact);
            OracleResult dn = worst_case_oracle(q1, ball, x, GridSpec{}, OracleSense::kMin);
            double q_dn = 0.0;
            for (const auto& pt : dn.worst.points)
                q_dn += pt.mass * value_1d(2.0, 0.0, pt.s[0] - x.x[0]);
            CHECK(base1 - q_dn <= bound_g(2.0, eps + delta) + 1e-6);
        }
    }
}

TEST_CASE("inf-side drop with two-sided costs obeys the euclidean constant") {
    // the valley at s = x collects mass from both sides, so the worst-case
    // drop reaches sqrt(2 (q+^2 + q-^2) eps), beyond the sup-side constant
    const int cells = 400;
    std::vector<Atom> atoms;
    for (int k = 0; k < cells; ++k) atoms.push_back({-0.5 + (k + 0.5) / cells, 1.0 / cells});
    ProductDistribution Pd({Distribution1D::discrete(atoms)});
    CostVector q = CostVector::one_dim(2.0, 1.0);
    TenderPoint x{0.0};
    double base = expected_recourse(q, Pd, x, RecourseVariant::kExact);
    double eps = 0.05;
    WassersteinBall ball{Pd, 1.0, eps};
    GridSpec grid;
    grid.stabilize_tol = 1e-3;
    double dn = worst_case_oracle(q, ball, x, grid, OracleSense::kMin).value;
    double drop = base - dn;
    CHECK(drop > bound_g(2.0, eps) + 5e-2);  // exceeds the sup-side constant
    CHECK(drop <= std::sqrt(2.0 * (4.0 + 1.0) * eps) + 1e-4);
    CHECK(drop == Catch::Approx(std::sqrt(2.0 * 5.0 * eps)).margin(1e-3));
}
