#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirdro/numerics/lp.hpp"
#include "sirdro/numerics/minimize.hpp"
#include "sirdro/numerics/polynomial.hpp"

using namespace sirdro;

TEST_CASE("polynomial evaluation, shift, arithmetic") {
    Polynomial p({1.0, 2.0, 3.0});  // 1 + 2t + 3t^2
    CHECK(p(2.0) == Catch::Approx(17.0));
    Polynomial q = p.shifted(1.0);  // p(t+1) = 6 + 8t + 3t^2
    CHECK(q(0.0) == Catch::Approx(p(1.0)));
    CHECK(q(2.5) == Catch::Approx(p(3.5)));
    Polynomial prod = p * Polynomial({0.0, 1.0});
    CHECK(prod(3.0) == Catch::Approx(3.0 * p(3.0)));
    CHECK(p.derivative()(2.0) == Catch::Approx(2.0 + 12.0));
}

TEST_CASE("poly_integrate basics") {
    PiecewisePolynomial one({0.0, 1.0}, {Polynomial::constant(1.0)});
    CHECK(one.integrate(0.0, 1.0) == Catch::Approx(1.0));

    PiecewisePolynomial ramp({0.0, 1.0}, {Polynomial({0.0, 1.0})});
    CHECK(ramp.integrate(0.0, 1.0) == Catch::Approx(0.5));

    // triangular density from the unit average of U(0,1)
    PiecewisePolynomial tri({-0.5, 0.5, 1.5},
                            {Polynomial({0.5, 1.0}), Polynomial({1.5, -1.0})});
    CHECK(tri.integrate(-0.5, 1.5) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("poly_integrate additive over adjacent intervals") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    PiecewisePolynomial f({-2.0, -0.5, 1.0, 2.5},
                          {Polynomial({1.0, 0.3}), Polynomial({0.2, -0.1, 0.4}),
                           Polynomial({0.5})});
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng), c = u(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        CHECK(f.integrate(a, b) + f.integrate(b, c) ==
              Catch::Approx(f.integrate(a, c)).margin(1e-12));
    }
}

TEST_CASE("poly_integrate rejects unbounded mass") {
    PiecewisePolynomial bad({0.0, kInf}, {Polynomial::constant(1.0)});
    CHECK_THROWS_AS(bad.integrate(0.0, kInf), Error);
    PiecewisePolynomial ok({-kInf, 0.0, 1.0, kInf},
                           {Polynomial(), Polynomial::constant(1.0), Polynomial()});
    CHECK(ok.integrate(-kInf, kInf) == Catch::Approx(1.0));
}

TEST_CASE("polynomial root finding") {
    Polynomial p({-2.0, 0.0, 1.0});  // t^2 - 2
    auto roots = p.roots_in(0.0, 3.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
    Polynomial cub({0.0, -1.0, 0.0, 1.0});  // t^3 - t
    CHECK(cub.roots_in(-2.0, 2.0).size() == 3);
}

TEST_CASE("lp_solve single-constraint box") {
    LinearProgram lp;
    lp.maximize = true;
    lp.objective = {1.0};
    lp.add_row({1.0}, RowSense::kLe, 1.0);
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(1.0).margin(1e-8));
    CHECK(sol.x[0] == Catch::Approx(1.0).margin(1e-8));
    CHECK(sol.cs_residual <= 1e-6);
}

TEST_CASE("lp_solve simplex face") {
    LinearProgram lp;
    lp.maximize = true;
    lp.objective = {1.0, 1.0};
    lp.add_row({1.0, 1.0}, RowSense::kLe, 1.0);
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("lp_solve transportation example between two-point and four-corner laws") {
    // sources: (0,1), (1,0) each 1/2; sinks: four unit-square corners each 1/4;
    // cost |s - sbar|_1 -> optimal value 1/2
    std::vector<std::pair<double, double>> src = {{0, 1}, {1, 0}};
    std::vector<std::pair<double, double>> dst = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    LinearProgram lp;
    lp.objective.resize(8);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j)
            lp.objective[i * 4 + j] = std::abs(src[i].first - dst[j].first) +
                                      std::abs(src[i].second - dst[j].second);
    for (int i = 0; i < 2; ++i) {
        std::vector<double> row(8, 0.0);
        for (int j = 0; j < 4; ++j) row[i * 4 + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, 0.5);
    }
    for (int j = 0; j < 4; ++j) {
        std::vector<double> row(8, 0.0);
        for (int i = 0; i < 2; ++i) row[i * 4 + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, 0.25);
    }
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(0.5).margin(1e-8));
}

TEST_CASE("lp_solve detects infeasible and unbounded problems") {
    LinearProgram infeas;
    infeas.objective = {1.0};
    infeas.add_row({1.0}, RowSense::kLe, 1.0);
    infeas.add_row({1.0}, RowSense::kGe, 2.0);
    CHECK(lp_solve(infeas).status == LpStatus::kInfeasible);

    LinearProgram unb;
    unb.maximize = true;
    unb.objective = {1.0};
    unb.add_row({-1.0}, RowSense::kLe, 0.0);
    CHECK(lp_solve(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("lp_solve handles free variables and equalities") {
    // min x + y s.t. x + y = 3, x - y >= 1, y free
    LinearProgram lp;
    lp.objective = {1.0, 1.0};
    lp.lower = {-kInf, -kInf};
    lp.upper = {kInf, kInf};
    lp.add_row({1.0, 1.0}, RowSense::kEq, 3.0);
    lp.add_row({1.0, -1.0}, RowSense::kGe, 1.0);
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(3.0).margin(1e-8));
}

TEST_CASE("strong LP duality spot-check on random small instances") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + int(rng() % 4), m = 1 + int(rng() % 3);
        std::vector<double> c(n), b(m);
        std::vector<std::vector<double>> A(m, std::vector<double>(n));
        for (auto& v : c) v = u(rng);
        for (auto& v : b) v = u(rng);
        for (auto& row : A)
            for (auto& v : row) v = u(rng);
        // primal: max c^T x s.t. Ax <= b, x >= 0
        LinearProgram primal;
        primal.maximize = true;
        primal.objective = c;
        for (int i = 0; i < m; ++i) primal.add_row(A[i], RowSense::kLe, b[i]);
        // dual: min b^T y s.t. A^T y >= c, y >= 0
        LinearProgram dual;
        dual.objective = b;
        for (int j = 0; j < n; ++j) {
            std::vector<double> row(m);
            for (int i = 0; i < m; ++i) row[i] = A[i][j];
            dual.add_row(std::move(row), RowSense::kGe, c[j]);
        }
        LpSolution ps = lp_solve(primal), ds = lp_solve(dual);
        REQUIRE(ps.status == LpStatus::kOptimal);
        REQUIRE(ds.status == LpStatus::kOptimal);
        CHECK(ps.objective == Catch::Approx(ds.objective).margin(1e-6));
        CHECK(ps.cs_residual <= 1e-6);
        // duals of the primal rows recover the dual solution's objective
        double via_duals = 0.0;
        for (int i = 0; i < m; ++i) via_duals += ps.row_duals[i] * b[i];
        CHECK(via_duals == Catch::Approx(ps.objective).margin(1e-6));
    }
}

TEST_CASE("lp_solve with finite variable boxes and bound flips") {
    LinearProgram lp;
    lp.maximize = true;
    lp.objective = {1.0, -2.0};
    lp.lower = {0.0, -1.5};
    lp.upper = {2.0, 4.0};
    lp.add_row({1.0, 1.0}, RowSense::kLe, 10.0);  // slack constraint
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.x[0] == Catch::Approx(2.0));
    CHECK(sol.x[1] == Catch::Approx(-1.5));
    CHECK(sol.objective == Catch::Approx(5.0));
}

TEST_CASE("lp_solve survives redundant rows and duplicate columns") {
    LinearProgram lp;
    lp.maximize = true;
    lp.objective = {1.0, 1.0, 2.0};
    lp.add_row({1.0, 1.0, 0.0}, RowSense::kEq, 1.0);
    lp.add_row({1.0, 1.0, 0.0}, RowSense::kEq, 1.0);  // duplicate
    lp.add_row({0.0, 0.0, 1.0}, RowSense::kLe, 3.0);
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(7.0));
}

TEST_CASE("lp_solve on a degenerate assignment-like problem") {
    // many zero-cost ties; exercises the anti-cycling path
    const int n = 8;
    LinearProgram lp;
    lp.objective.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lp.objective[i * n + j] = (i == j) ? 0.0 : 1.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(n * n, 0.0);
        for (int j = 0; j < n; ++j) row[i * n + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, 1.0 / n);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> row(n * n, 0.0);
        for (int i = 0; i < n; ++i) row[i * n + j] = 1.0;
        lp.add_row(std::move(row), RowSense::kEq, 1.0 / n);
    }
    LpSolution sol = lp_solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("minimize_convex_1d quadratic and kinks") {
    auto r1 = minimize_convex_1d([](double x) { return (x - 3.0) * (x - 3.0); }, 0.0, 10.0, 1e-6);
    CHECK(r1.x == Catch::Approx(3.0).margin(1e-5));
    auto r2 = minimize_convex_1d([](double x) { return std::abs(x); }, -1.0, 2.0, 1e-9);
    CHECK(r2.x == Catch::Approx(0.0).margin(1e-7));
    // q+ (a - x + 1/2)^+ + c x with c=1, q+=2, a=0: minimizer x = 1/2
    auto r3 = minimize_convex_1d(
        [](double x) { return 2.0 * std::max(0.0 - x + 0.5, 0.0) + x; }, -5.0, 5.0, 1e-9);
    CHECK(r3.x == Catch::Approx(0.5).margin(1e-6));
    CHECK_THROWS_AS(minimize_convex_1d([](double x) { return x; }, 1.0, 0.0), Error);
}

TEST_CASE("minimize_convex_1d optimality property") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        double a = u(rng), w = std::abs(u(rng)) + 0.2;
        auto f = [&](double x) { return w * (x - a) * (x - a) + std::abs(x); };
        auto r = minimize_convex_1d(f, -8.0, 8.0, 1e-7);
        CHECK(r.value <= f(r.x + 2e-7) + 1e-9);
        CHECK(r.value <= f(r.x - 2e-7) + 1e-9);
    }
}
