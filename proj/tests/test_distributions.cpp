#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirdro/distributions/distribution1d.hpp"
#include "sirdro/distributions/joint_discrete.hpp"
#include "sirdro/distributions/product.hpp"
#include "sirdro/distributions/wasserstein.hpp"

using namespace sirdro;

namespace {

std::mt19937_64 rng(20240517);

Distribution1D random_discrete(int max_atoms = 10, double span = 6.0) {
    std::uniform_int_distribution<int> nd(1, max_atoms);
    std::uniform_real_distribution<double> loc(-span / 2, span / 2);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    int n = nd(rng);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({loc(rng), w(rng)});
        total += atoms.back().mass;
    }
    for (auto& a : atoms) a.mass /= total;
    return Distribution1D::discrete(std::move(atoms));
}

// random mixture of a few atoms and uniform blocks
Distribution1D random_mixed() {
    std::uniform_real_distribution<double> loc(-3.0, 3.0);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    std::uniform_real_distribution<double> len(0.2, 1.5);
    int n_atoms = 1 + int(rng() % 3);
    int n_blocks = int(rng() % 3);
    std::vector<Atom> atoms;
    double total = 0.0;
    std::vector<std::pair<std::pair<double, double>, double>> blocks;
    for (int i = 0; i < n_atoms; ++i) {
        atoms.push_back({loc(rng), w(rng)});
        total += atoms.back().mass;
    }
    for (int i = 0; i < n_blocks; ++i) {
        double a = loc(rng), b = a + len(rng), m = w(rng);
        blocks.push_back({{a, b}, m});
        total += m;
    }
    for (auto& a : atoms) a.mass /= total;
    PiecewisePolynomial density;
    if (!blocks.empty()) {
        // assemble disjoint uniform blocks into one piecewise density,
        // padding the gaps with zero segments
        std::sort(blocks.begin(), blocks.end());
        std::vector<double> breaks;
        std::vector<Polynomial> pieces;
        double cursor = -kInf;
        for (auto& [ab, m] : blocks) {
            double a = std::max(ab.first, cursor + 1e-6);
            double b = std::max(ab.second, a + 0.1);
            if (!breaks.empty()) {
                pieces.push_back(Polynomial::constant(0.0));  // gap segment
                breaks.push_back(a);
            } else {
                breaks.push_back(a);
            }
            breaks.push_back(b);
            pieces.push_back(Polynomial::constant(m / (total * (b - a))));
            cursor = b;
        }
        density = PiecewisePolynomial(std::move(breaks), std::move(pieces));
    }
    return Distribution1D(std::move(atoms), std::move(density));
}

}  // namespace

TEST_CASE("cdf basics") {
    Distribution1D d0 = Distribution1D::point(0.0);
    CHECK(d0.cdf(-0.1) == 0.0);
    CHECK(d0.cdf(0.0) == 1.0);

    Distribution1D u01 = Distribution1D::uniform(0.0, 1.0);
    CHECK(u01.cdf(0.25) == Catch::Approx(0.25));

    Distribution1D g = gamma_transform(d0);  // uniform on (-1/2, 1/2)
    CHECK(g.cdf(0.0) == Catch::Approx(0.5));
}

TEST_CASE("gamma_transform of a point and of U(0,1)") {
    Distribution1D g = gamma_transform(Distribution1D::point(2.0));
    CHECK(g.atoms().empty());
    CHECK(g.density()(2.0) == Catch::Approx(1.0));
    CHECK(g.density()(1.50001) == Catch::Approx(1.0));
    CHECK(g.density()(2.51) == Catch::Approx(0.0));
    CHECK(g.density().integrate_all() == Catch::Approx(1.0).margin(1e-12));

    Distribution1D t = gamma_transform(Distribution1D::uniform(0.0, 1.0));
    CHECK(t.density()(0.0) == Catch::Approx(0.5));    // t + 1/2 at 0
    CHECK(t.density()(-0.25) == Catch::Approx(0.25));
    CHECK(t.density()(1.0) == Catch::Approx(0.5));    // 3/2 - t at 1
    CHECK(t.density()(0.5) == Catch::Approx(1.0));
    CHECK(t.density().integrate_all() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("gamma_transform of a two-point mixture") {
    Distribution1D d({{0.0, 0.5}, {1.0, 0.5}}, {});
    Distribution1D g = gamma_transform(d);
    CHECK(g.density()(0.0) == Catch::Approx(0.5));
    CHECK(g.density()(0.5001) == Catch::Approx(0.5));
    CHECK(g.density()(1.2) == Catch::Approx(0.5));
    CHECK(g.density().integrate(-0.5, 1.5) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("gamma_transform normalization on random inputs") {
    for (int i = 0; i < 60; ++i) {
        Distribution1D d = random_mixed();
        Distribution1D g = gamma_transform(d);
        CHECK(g.atoms().empty());
        CHECK(g.density().integrate_all() == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("repeated unit averages stay within the degree budget") {
    Distribution1D d = Distribution1D::discrete({{0.0, 0.4}, {1.3, 0.6}});
    Distribution1D g1 = gamma_transform(d);    // piecewise constant
    Distribution1D g2 = gamma_transform(g1);   // piecewise affine
    CHECK(g2.density().max_degree() <= 2);
    CHECK(g2.density().integrate_all() == Catch::Approx(1.0).margin(1e-10));
    // the double average has the same mean as the source
    CHECK(g2.mean() == Catch::Approx(d.mean()).margin(1e-10));
}

TEST_CASE("fractional value of a unit-averaged law is uniform on [0,1)") {
    for (int i = 0; i < 10; ++i) {
        Distribution1D g = gamma_transform(random_mixed());
        const auto& f = g.density();
        // cdf of the fractional part at u equals u
        for (double u : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            double mass = 0.0;
            double lo = std::floor(f.support_lo()) - 1.0;
            double hi = std::ceil(f.support_hi()) + 1.0;
            for (double k = lo; k < hi; k += 1.0) mass += f.integrate(k, k + u);
            CHECK(mass == Catch::Approx(u).margin(1e-8));
        }
    }
}

TEST_CASE("gamma_alpha_transform cell smearing") {
    Distribution1D a = gamma_alpha_transform(Distribution1D::point(0.3), 0.0);
    CHECK(a.density()(0.5) == Catch::Approx(1.0));
    CHECK(a.density()(-0.1) == Catch::Approx(0.0));
    CHECK(a.density().support_lo() == Catch::Approx(0.0));
    CHECK(a.density().support_hi() == Catch::Approx(1.0));

    Distribution1D u = Distribution1D::uniform(0.0, 1.0);
    Distribution1D fix = gamma_alpha_transform(u, 0.0);
    CHECK(fix.density()(0.25) == Catch::Approx(1.0));
    CHECK(wasserstein_1d(u, fix, 1.0) == Catch::Approx(0.0).margin(1e-12));

    Distribution1D b = gamma_alpha_transform(Distribution1D::point(0.3), 0.5);
    CHECK(b.density()(0.0) == Catch::Approx(1.0));
    CHECK(b.density().support_lo() == Catch::Approx(-0.5));
    CHECK(b.density().support_hi() == Catch::Approx(0.5));
}

TEST_CASE("gamma_alpha_transform is idempotent") {
    for (int i = 0; i < 20; ++i) {
        Distribution1D d = random_mixed();
        Distribution1D once = gamma_alpha_transform(d, 0.25);
        Distribution1D twice = gamma_alpha_transform(once, 0.25);
        CHECK(wasserstein_1d(once, twice, 1.0) == Catch::Approx(0.0).margin(1e-10));
    }
}

TEST_CASE("product_gamma acts marginal by marginal") {
    ProductDistribution p({Distribution1D::point(0.0), Distribution1D::point(0.0)});
    ProductDistribution g = product_gamma(p);
    for (int i = 0; i < 2; ++i) {
        CHECK(g.marginal(i).density()(0.0) == Catch::Approx(1.0));
        CHECK(g.marginal(i).density().support_lo() == Catch::Approx(-0.5));
    }
    // m = 1 reduces to the scalar transform
    ProductDistribution one({Distribution1D::uniform(0.0, 1.0)});
    CHECK(wasserstein_1d(product_gamma(one).marginal(0),
                         gamma_transform(Distribution1D::uniform(0.0, 1.0)),
                         1.0) == Catch::Approx(0.0).margin(1e-12));
    // mixed marginals
    ProductDistribution two({Distribution1D::uniform(0.0, 1.0), Distribution1D::point(2.0)});
    ProductDistribution g2 = product_gamma(two);
    CHECK(g2.marginal(0).density()(0.5) == Catch::Approx(1.0));
    CHECK(g2.marginal(1).density()(2.0) == Catch::Approx(1.0));
    CHECK(g2.marginal(1).density().support_lo() == Catch::Approx(1.5));
}

TEST_CASE("wasserstein_1d closed cases") {
    CHECK(wasserstein_1d(Distribution1D::point(0.0), Distribution1D::point(1.0), 1.0) ==
          Catch::Approx(1.0));
    Distribution1D da = Distribution1D::point(1.3);
    CHECK(wasserstein_1d(da, gamma_transform(da), 1.0) == Catch::Approx(0.25).margin(1e-10));
    double w2 = wasserstein_1d(Distribution1D::point(0.0),
                               Distribution1D::uniform(-0.5, 0.5), 2.0);
    CHECK(w2 * w2 == Catch::Approx(1.0 / 12.0).margin(1e-6));
}

TEST_CASE("unit-average transport distance is at most 1/4") {
    for (int i = 0; i < 60; ++i) {
        Distribution1D d = random_mixed();
        double w = wasserstein_1d(d, gamma_transform(d), 1.0);
        CHECK(w <= 0.25 + 1e-8);
    }
    // equality at atoms
    Distribution1D p = Distribution1D::point(-2.0);
    CHECK(wasserstein_1d(p, gamma_transform(p), 1.0) == Catch::Approx(0.25).margin(1e-10));
}

TEST_CASE("joint discrete transportation distance, example configuration") {
    JointDiscrete P{{{{0, 1}, 0.5}, {{1, 0}, 0.5}}};
    JointDiscrete Pb{{{{0, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{1, 1}, 0.25}}};
    CHECK(wasserstein_joint_discrete(P, Pb, 1.0) == Catch::Approx(0.5).margin(1e-9));
    CHECK(wasserstein_joint_discrete(P, P, 1.0) == Catch::Approx(0.0).margin(1e-12));
    // equal marginals: per-coordinate distances vanish, so separability is strict here
    for (int axis = 0; axis < 2; ++axis)
        CHECK(wasserstein_1d(P.project(axis), Pb.project(axis), 1.0) ==
              Catch::Approx(0.0).margin(1e-12));
}

namespace {
JointDiscrete random_joint(int dim, int max_pts = 5) {
    std::uniform_real_distribution<double> loc(-2.0, 2.0);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    int n = 1 + int(rng() % max_pts);
    JointDiscrete d;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> s(dim);
        for (auto& v : s) v = loc(rng);
        d.points.push_back({std::move(s), w(rng)});
        total += d.points.back().mass;
    }
    for (auto& p : d.points) p.mass /= total;
    d.dedup();
    return d;
}
}  // namespace

TEST_CASE("separability: joint distance dominates the sum of marginal distances") {
    for (int trial = 0; trial < 100; ++trial) {
        double p = (trial % 2 == 0) ? 1.0 : 2.0;
        JointDiscrete a = random_joint(2), b = random_joint(2);
        double joint = std::pow(wasserstein_joint_discrete(a, b, p), p);
        double sum = 0.0;
        for (int axis = 0; axis < 2; ++axis)
            sum += std::pow(wasserstein_1d(a.project(axis), b.project(axis), p), p);
        CHECK(joint >= sum - 1e-8);
    }
}

TEST_CASE("separability attainment via coordinatewise reshaping") {
    for (int trial = 0; trial < 25; ++trial) {
        double p = (trial % 2 == 0) ? 1.0 : 2.0;
        JointDiscrete a = random_joint(2, 4), b = random_joint(2, 4);
        JointDiscrete tilde = reshape_marginals(a, b);
        // marginals of the reshaped law match the target
        for (int axis = 0; axis < 2; ++axis)
            CHECK(wasserstein_1d(tilde.project(axis), b.project(axis), 1.0) ==
                  Catch::Approx(0.0).margin(1e-10));
        double sum = 0.0;
        for (int axis = 0; axis < 2; ++axis)
            sum += std::pow(wasserstein_1d(a.project(axis), b.project(axis), p), p);
        double joint = std::pow(wasserstein_joint_discrete(a, tilde, p), p);
        CHECK(joint == Catch::Approx(sum).margin(1e-8));
    }
}

TEST_CASE("distribution invariants are enforced") {
    CHECK_THROWS_AS(Distribution1D::discrete({{0.0, 0.5}}), Error);  // mass != 1
    CHECK_THROWS_AS(Distribution1D({{0.0, 0.5}, {1.0, 0.6}}, {}), Error);
    // degree cap: gamma of a degree-4 density is rejected
    PiecewisePolynomial deg4({0.0, 1.0}, {Polynomial({0.0, 0.0, 0.0, 0.0, 5.0})});
    Distribution1D quartic({}, deg4);
    CHECK_THROWS_AS(gamma_transform(quartic), Error);
}
