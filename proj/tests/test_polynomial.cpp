#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "koopman/errors.hpp"
#include "koopman/parse.hpp"
#include "koopman/polynomial.hpp"
#include "support/oracles.hpp"

using namespace koopman;

namespace {

Chart xp() { return Chart::canonical({"x"}, {"p"}); }
Chart xp2() { return Chart::canonical({"x1", "x2"}, {"p1", "p2"}); }
Chart zchart() { return Chart::conjugate_pairs({{"z", "zbar"}}); }

}  // namespace

TEST_CASE("chart structure and index maps") {
    Chart c = xp2();
    CHECK(c.kind() == ChartKind::canonical);
    CHECK(c.dim() == 4);
    CHECK(c.pair_count() == 2);
    CHECK(c.base_index(0) == 0);
    CHECK(c.base_index(1) == 1);
    CHECK(c.momentum_index(0) == 2);
    CHECK(c.momentum_index(1) == 3);
    CHECK(c.index("p2") == 3);
    CHECK(c.try_index("q") == -1);
    CHECK_THROWS(c.index("q"));
    for (int i = 0; i < 4; ++i) CHECK(c.conjugate_index(i) == i);

    Chart z = Chart::conjugate_pairs({{"z1", "z1bar"}, {"z2", "z2bar"}});
    CHECK(z.dim() == 4);
    CHECK(z.conjugate_index(0) == 1);
    CHECK(z.conjugate_index(1) == 0);
    CHECK(z.conjugate_index(3) == 2);

    CHECK(xp() == xp());
    CHECK(xp() != xp2());
    CHECK_THROWS(Chart::plain({"x", "x"}));
    CHECK_THROWS(Chart::canonical({}, {}));
}

TEST_CASE("factories, coefficients, canonical zero dropping") {
    Chart c = xp();
    Polynomial x = Polynomial::coordinate(c, "x");
    Polynomial p = Polynomial::coordinate(c, "p");
    CHECK(x.degree() == 1);
    CHECK(x.coefficient({1, 0}) == Cplx(1, 0));
    CHECK(x.coefficient({0, 1}) == Cplx(0, 0));

    Polynomial m = Polynomial::monomial(c, {2, 1}, Cplx(3, 0));
    CHECK(m.degree() == 3);
    CHECK(m.term_count() == 1);

    Polynomial k = Polynomial::constant(c, Cplx(0, 2));
    CHECK(k.degree() == 0);
    CHECK(k.constant_value() == Cplx(0, 2));

    Polynomial diff = (x + p) - (x + p);
    CHECK(diff.is_zero());
    CHECK(diff.term_count() == 0);
    CHECK(diff.degree() == Polynomial::kNegInfDegree);

    Polynomial prod = (x + p) * (x - p) - (x * x - p * p);
    CHECK(prod.is_zero());

    CHECK_THROWS_AS(x + Polynomial::coordinate(xp2(), "x1"), ChartMismatchError);
}

TEST_CASE("ring identities hold exactly on integer data") {
    std::mt19937_64 rng(7);
    Chart c = xp2();
    for (int round = 0; round < 50; ++round) {
        Polynomial a = oracles::random_integer_polynomial(rng, c, 4, 5);
        Polynomial b = oracles::random_integer_polynomial(rng, c, 4, 5);
        Polynomial d = oracles::random_integer_polynomial(rng, c, 3, 4);
        CHECK(a * b == b * a);
        CHECK((a + b) * d == a * d + b * d);
        CHECK((a * b) * d == a * (b * d));
        CHECK(a - a == Polynomial(c));
        CHECK(-(-a) == a);
        CHECK(a * Cplx(2, -3) == Cplx(2, -3) * a);
    }
}

TEST_CASE("derivatives: Leibniz rule, commuting partials, degree drop") {
    std::mt19937_64 rng(11);
    Chart c = xp2();
    for (int round = 0; round < 30; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c, 4, 5);
        Polynomial g = oracles::random_integer_polynomial(rng, c, 4, 5);
        for (int u = 0; u < c.dim(); ++u) {
            CHECK((f * g).derivative(u) == f.derivative(u) * g + f * g.derivative(u));
            for (int v = 0; v < c.dim(); ++v)
                CHECK(f.derivative(u).derivative(v) == f.derivative(v).derivative(u));
        }
    }
    Polynomial k = Polynomial::constant(c, Cplx(5, 1));
    CHECK(k.derivative(0).is_zero());
    Polynomial m = Polynomial::monomial(c, {3, 0, 0, 0}, Cplx(1, 0));
    CHECK(m.derivative("x1") == Polynomial::monomial(c, {2, 0, 0, 0}, Cplx(3, 0)));
}

TEST_CASE("evaluation agrees with a direct term sum") {
    std::mt19937_64 rng(13);
    Chart c = xp2();
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int round = 0; round < 20; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c, 5, 6);
        std::vector<Cplx> pt = {Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)),
                                Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng))};
        Cplx direct = 0.0;
        for (const auto& [e, coeff] : f.terms()) {
            Cplx t = coeff;
            for (int i = 0; i < c.dim(); ++i)
                for (int r = 0; r < e[i]; ++r) t *= pt[i];
            direct += t;
        }
        CHECK(oracles::dist(f.evaluate(pt), direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("substitute_values pins coordinates and stays on the chart") {
    Chart c = xp();
    Polynomial f = parse_polynomial(c, "x^2*p + 2*x - p^3");
    Polynomial g = f.substitute_values({{"x", Cplx(2, 0)}});
    CHECK(g.chart() == c);
    CHECK(g == parse_polynomial(c, "4*p + 4 - p^3"));
    Polynomial h = g.substitute_values({{"p", Cplx(1, 1)}});
    CHECK(h.term_count() == 1);
    CHECK(oracles::dist(h.constant_value(), f.evaluate(std::vector<Cplx>{{2, 0}, {1, 1}})) ==
          0.0);
}

TEST_CASE("conjugation: involution, multiplicativity, chart involution") {
    std::mt19937_64 rng(17);
    Chart c = xp();
    for (int round = 0; round < 20; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c, 4, 4);
        Polynomial g = oracles::random_integer_polynomial(rng, c, 4, 4);
        CHECK(f.conjugate().conjugate() == f);
        CHECK((f * g).conjugate() == f.conjugate() * g.conjugate());
        CHECK((f + g).conjugate() == f.conjugate() + g.conjugate());
    }

    Chart z = zchart();
    Polynomial zn = Polynomial::monomial(z, {2, 0}, Cplx(0, 1));
    Polynomial c1 = zn.conjugate();
    CHECK(c1 == Polynomial::monomial(z, {0, 2}, Cplx(0, -1)));
    Polynomial zzbar = Polynomial::monomial(z, {1, 1}, Cplx(1, 0));
    CHECK(zzbar.conjugate() == zzbar);
}

TEST_CASE("poisson bracket: normalization, antisymmetry, Jacobi, Leibniz") {
    Chart c = xp();
    Polynomial x = Polynomial::coordinate(c, "x");
    Polynomial p = Polynomial::coordinate(c, "p");
    CHECK(poisson_bracket(x, p) == Polynomial::constant(c, 1.0));
    CHECK(poisson_bracket(p, x) == Polynomial::constant(c, -1.0));

    std::mt19937_64 rng(19);
    Chart c2 = xp2();
    for (int round = 0; round < 15; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c2, 3, 4, 3);
        Polynomial g = oracles::random_integer_polynomial(rng, c2, 3, 4, 3);
        Polynomial h = oracles::random_integer_polynomial(rng, c2, 3, 4, 3);
        CHECK(poisson_bracket(f, g) == -Cplx(1, 0) * poisson_bracket(g, f));
        Polynomial jacobi = poisson_bracket(f, poisson_bracket(g, h)) +
                            poisson_bracket(g, poisson_bracket(h, f)) +
                            poisson_bracket(h, poisson_bracket(f, g));
        CHECK(jacobi.is_zero());
        CHECK(poisson_bracket(f * g, h) ==
              f * poisson_bracket(g, h) + poisson_bracket(f, h) * g);
    }

    CHECK_THROWS(poisson_bracket(Polynomial::coordinate(zchart(), "z"),
                                 Polynomial::coordinate(zchart(), "zbar")));
}

TEST_CASE("substitution composes and respects degree bounds") {
    std::mt19937_64 rng(23);
    Chart c = xp();
    std::vector<Polynomial> identity = {Polynomial::coordinate(c, 0),
                                        Polynomial::coordinate(c, 1)};
    for (int round = 0; round < 20; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c, 4, 5);
        CHECK(f.substitute(identity, c) == f);

        std::vector<Polynomial> images = {
            oracles::random_integer_polynomial(rng, c, 2, 3, 2),
            oracles::random_integer_polynomial(rng, c, 2, 3, 2)};
        Polynomial g = oracles::random_integer_polynomial(rng, c, 3, 4, 2);
        CHECK((f + g).substitute(images, c) ==
              f.substitute(images, c) + g.substitute(images, c));
        CHECK((f * g).substitute(images, c) ==
              f.substitute(images, c) * g.substitute(images, c));
    }
}

TEST_CASE("text forms match the documented shapes") {
    Chart c = xp();
    CHECK(Polynomial(c).to_text() == "0");
    CHECK(Polynomial::coordinate(c, "x").to_text() == "x^1");

    Polynomial f = Polynomial::monomial(c, {2, 1}, 3.0) -
                   Polynomial::monomial(c, {0, 2}, 1.0) +
                   Polynomial::constant(c, 2.0);
    CHECK(f.to_text() == "3*x^2*p^1 - p^2 + 2");

    Polynomial g = Polynomial::coordinate(c, "x") -
                   Polynomial::monomial(c, {0, 1}, Cplx(0, 2));
    CHECK(g.to_text() == "x^1 - 2i*p^1");

    CHECK(format_coefficient(Cplx(3, 0)) == "3");
    CHECK(format_coefficient(Cplx(0, -2)) == "-2i");
    CHECK(format_coefficient(Cplx(3, 2)) == "(3+2i)");
    CHECK(format_coefficient(Cplx(-1, -1)) == "(-1-1i)");
    CHECK(format_coefficient(Cplx(0.5, 0)) == "0.5");

    CHECK(monomial_text(c, {2, 1}) == "x^2*p");
    CHECK(monomial_text(c, {0, 0}) == "1");
    CHECK(monomial_text(c, {0, 1}) == "p");
}

TEST_CASE("parser accepts the grammar and reports positions") {
    Chart c = xp();
    Polynomial f = parse_polynomial(c, "3*x^2*p - p^2 + 2");
    CHECK(f == Polynomial::monomial(c, {2, 1}, 3.0) - Polynomial::monomial(c, {0, 2}, 1.0) +
                   Polynomial::constant(c, 2.0));

    CHECK(parse_polynomial(c, "-x") == -Polynomial::coordinate(c, "x"));
    CHECK(parse_polynomial(c, "(1-2i)*x + 3i") ==
          Polynomial::monomial(c, {1, 0}, Cplx(1, -2)) + Polynomial::constant(c, Cplx(0, 3)));
    CHECK(parse_polynomial(c, "x*x*p^2") == Polynomial::monomial(c, {2, 2}, 1.0));
    CHECK(parse_polynomial(c, "  2e1 * x ") == Polynomial::monomial(c, {1, 0}, 20.0));
    CHECK(parse_polynomial(c, "1i*1i") == Polynomial::constant(c, -1.0));

    CHECK_THROWS_AS(parse_polynomial(c, "x + q"), ParseError);
    CHECK_THROWS_AS(parse_polynomial(c, "x^"), ParseError);
    CHECK_THROWS_AS(parse_polynomial(c, "x 2"), ParseError);
    CHECK_THROWS_AS(parse_polynomial(c, ""), ParseError);
    try {
        parse_polynomial(c, "x + q");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("parser round-trips canonical text on integer data") {
    std::mt19937_64 rng(29);
    Chart c = xp2();
    for (int round = 0; round < 40; ++round) {
        Polynomial f = oracles::random_integer_polynomial(rng, c, 5, 6);
        CHECK(parse_polynomial(c, f.to_text()) == f);
    }
}

TEST_CASE("identifier scan skips numeric literals") {
    auto ids = scan_identifiers("2e3*x + 1i*p^2 - x*y");
    REQUIRE(ids.size() == 3);
    CHECK(ids[0] == "x");
    CHECK(ids[1] == "p");
    CHECK(ids[2] == "y");
    CHECK(scan_identifiers("1 + 2i").empty());
}

TEST_CASE("coefficient distance covers the union of terms") {
    Chart c = xp();
    Polynomial x = Polynomial::coordinate(c, "x");
    Polynomial p = Polynomial::coordinate(c, "p");
    CHECK(max_coeff_distance(x, x) == 0.0);
    CHECK(max_coeff_distance(x, p) == 1.0);
    CHECK(max_coeff_distance(x, x * 1.5) == doctest::Approx(0.5));
}
