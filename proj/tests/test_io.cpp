#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "sirdro/io/problem.hpp"
#include "sirdro/io/serialize.hpp"

using namespace sirdro;

TEST_CASE("distribution text round trip") {
    ProductDistribution P({Distribution1D::discrete({{0.25, 0.5}, {1.75, 0.5}}),
                           Distribution1D::uniform(-1.0, 1.0)});
    std::string text = serialize_distribution(P);
    std::istringstream is(text);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    ProductDistribution Q = parse_distribution(lines);
    REQUIRE(Q.dim() == 2);
    CHECK(Q.marginal(0).atoms().size() == 2);
    CHECK(Q.marginal(0).atoms()[1].loc == 1.75);
    CHECK(Q.marginal(1).density()(0.0) == Catch::Approx(0.5));
    // byte-identical after a second round trip
    CHECK(serialize_distribution(Q) == text);
}

TEST_CASE("problem file parse and canonical dump round trip") {
    std::string text =
        "# newsvendor with a point reference\n"
        "[cost]\n"
        "2 0\n"
        "[distribution]\n"
        "atom 1 1\n"
        "[ball]\n"
        "p 1\n"
        "eps 0.5\n"
        "[first-stage]\n"
        "c 1\n"
        "box -3 5\n";
    std::istringstream is(text);
    ProblemFile pf = parse_problem(is);
    CHECK(pf.cost.q[0].plus == 2.0);
    REQUIRE(pf.ball.has_value());
    CHECK(pf.ball->eps == 0.5);
    REQUIRE(pf.first_stage.has_value());
    CHECK(pf.first_stage->box[0].second == 5.0);

    std::string canon = dump_problem(pf);
    std::istringstream is2(canon);
    ProblemFile pf2 = parse_problem(is2);
    CHECK(dump_problem(pf2) == canon);
}

TEST_CASE("moment problem parse") {
    std::string text =
        "[cost]\n"
        "2 0\n"
        "[distribution]\n"
        "atom 0 1\n"
        "[moments]\n"
        "dim 1 support -3 3\n"
        "dim 1 mean 0\n"
        "dim 1 mad 0 0.5\n";
    std::istringstream is(text);
    ProblemFile pf = parse_problem(is);
    REQUIRE(pf.moments.has_value());
    CHECK(pf.moments->dims[0].specs.size() == 2);
    CHECK(pf.moments->dims[0].lo == -3.0);
    std::string canon = dump_problem(pf);
    std::istringstream is2(canon);
    CHECK(dump_problem(parse_problem(is2)) == canon);
}

TEST_CASE("parse errors carry line numbers") {
    std::string bad =
        "[cost]\n"
        "2 zero\n";
    std::istringstream is(bad);
    try {
        parse_problem(is);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    std::string both =
        "[cost]\n2 0\n[distribution]\natom 0 1\n[ball]\neps 1\n[moments]\n"
        "dim 1 support -1 1\n";
    std::istringstream is2(both);
    CHECK_THROWS_AS(parse_problem(is2), ParseError);

    std::string dim_mismatch =
        "[cost]\n2 0\n1 1\n[distribution]\natom 0 1\n[ball]\neps 1\n";
    std::istringstream is3(dim_mismatch);
    CHECK_THROWS_AS(parse_problem(is3), ParseError);
}
