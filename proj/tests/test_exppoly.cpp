#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "koopman/exppoly.hpp"
#include "koopman/parse.hpp"
#include "support/oracles.hpp"

using namespace koopman;

namespace {

Chart xp() { return Chart::canonical({"x"}, {"p"}); }

ExpPoly sample(const Chart& c) {
    Polynomial amp = parse_polynomial(c, "x^2 + 2*p - 1");
    Polynomial phase = parse_polynomial(c, "-0.5*x^2 - 0.5*p^2");
    return ExpPoly::dressed(amp, phase);
}

}  // namespace

TEST_CASE("canonical form: folding, merging, zero dropping") {
    Chart c = xp();
    Polynomial one = Polynomial::constant(c, 1.0);
    Polynomial x = Polynomial::coordinate(c, "x");
    Polynomial p = Polynomial::coordinate(c, "p");
    Polynomial s = parse_polynomial(c, "-x^2");

    ExpPoly folded = ExpPoly::dressed(one, Polynomial::constant(c, Cplx(0, M_PI)));
    CHECK(folded.is_polynomial());
    CHECK(oracles::dist(folded.polynomial_part().constant_value(), Cplx(-1, 0)) < 1e-15);

    ExpPoly merged = ExpPoly::dressed(x, s) + ExpPoly::dressed(p, s);
    CHECK(merged.terms().size() == 1);
    CHECK(merged.terms()[0].amplitude == x + p);

    CHECK((ExpPoly::dressed(x, s) - ExpPoly::dressed(x, s)).is_zero());

    ExpPoly two_terms = ExpPoly::of(x) + ExpPoly::dressed(p, s);
    CHECK(two_terms.terms().size() == 2);
    CHECK_FALSE(two_terms.is_polynomial());
    CHECK(two_terms.polynomial_part() == x);
}

TEST_CASE("products add phases and multiply amplitudes") {
    Chart c = xp();
    Polynomial x = Polynomial::coordinate(c, "x");
    Polynomial s1 = parse_polynomial(c, "-x^2");
    Polynomial s2 = parse_polynomial(c, "-p^2 + x");

    ExpPoly prod = ExpPoly::dressed(x, s1) * ExpPoly::dressed(x, s2);
    REQUIRE(prod.terms().size() == 1);
    CHECK(prod.terms()[0].amplitude == x * x);
    CHECK(prod.terms()[0].phase == s1 + s2);

    std::vector<double> pt = {0.7, -1.3};
    ExpPoly f = sample(c);
    ExpPoly g = ExpPoly::dressed(x, s2);
    CHECK(oracles::dist((f * g).evaluate_real(pt),
                        f.evaluate_real(pt) * g.evaluate_real(pt)) < 1e-12);
    CHECK(oracles::dist((f + g).evaluate_real(pt),
                        f.evaluate_real(pt) + g.evaluate_real(pt)) < 1e-12);
}

TEST_CASE("derivative matches finite differences") {
    Chart c = xp();
    ExpPoly f = sample(c);
    ExpPoly fx = f.derivative("x");
    ExpPoly fp = f.derivative("p");
    for (double x0 : {-1.1, 0.3, 0.9}) {
        for (double p0 : {-0.4, 0.8}) {
            Cplx dx = oracles::central_diff(
                [&](double t) { return f.evaluate_real(std::vector<double>{t, p0}); }, x0);
            Cplx dp = oracles::central_diff(
                [&](double t) { return f.evaluate_real(std::vector<double>{x0, t}); }, p0);
            CHECK(oracles::dist(fx.evaluate_real(std::vector<double>{x0, p0}), dx) < 1e-9);
            CHECK(oracles::dist(fp.evaluate_real(std::vector<double>{x0, p0}), dp) < 1e-9);
        }
    }
}

TEST_CASE("derivative is a derivation over products") {
    Chart c = xp();
    ExpPoly f = sample(c);
    ExpPoly g = ExpPoly::dressed(parse_polynomial(c, "p - 1i*x"),
                                 parse_polynomial(c, "0.25*x^2"));
    ExpPoly lhs = (f * g).derivative("x");
    ExpPoly rhs = f.derivative("x") * g + f * g.derivative("x");
    std::vector<double> pt = {0.37, -0.81};
    CHECK(oracles::dist(lhs.evaluate_real(pt), rhs.evaluate_real(pt)) < 1e-12);
    CHECK(lhs == rhs);
}

TEST_CASE("conjugation commutes with evaluation at real points") {
    Chart c = xp();
    ExpPoly f = ExpPoly::dressed(parse_polynomial(c, "(1+2i)*x + p^2"),
                                 parse_polynomial(c, "-0.5*x^2 + 1i*p"));
    std::vector<double> pt = {0.6, -1.2};
    CHECK(oracles::dist(f.conjugate().evaluate_real(pt),
                        std::conj(f.evaluate_real(pt))) < 1e-13);
    CHECK(f.conjugate().conjugate() == f);
}

TEST_CASE("affine substitution shifts arguments; nonaffine rejected") {
    Chart c = xp();
    ExpPoly f = sample(c);
    std::vector<Polynomial> shift = {parse_polynomial(c, "x + 1"),
                                     parse_polynomial(c, "p - 2")};
    ExpPoly g = f.substitute(shift, c);
    std::vector<double> pt = {0.4, 0.9};
    CHECK(oracles::dist(g.evaluate_real(pt),
                        f.evaluate(std::vector<Cplx>{{1.4, 0}, {-1.1, 0}})) < 1e-12);

    std::vector<Polynomial> quad = {parse_polynomial(c, "x^2"),
                                    parse_polynomial(c, "p")};
    CHECK_THROWS(f.substitute(quad, c));

    ExpPoly pinned = f.substitute_values({{"p", Cplx(0.5, 0)}});
    CHECK(oracles::dist(pinned.evaluate_real(std::vector<double>{0.4, 123.0}),
                        f.evaluate_real(std::vector<double>{0.4, 0.5})) < 1e-12);
}

TEST_CASE("text form wraps dressed terms") {
    Chart c = xp();
    ExpPoly f = ExpPoly::dressed(Polynomial::coordinate(c, "x"),
                                 parse_polynomial(c, "-0.5*x^2"));
    CHECK(f.to_text() == "[x^1]*exp(-0.5*x^2)");
    CHECK(ExpPoly(c).to_text() == "0");
    CHECK(ExpPoly::of(Polynomial::coordinate(c, "p")).to_text() == "p^1");
}

TEST_CASE("amplitude norm tracks the largest coefficient") {
    Chart c = xp();
    ExpPoly f = sample(c);
    CHECK(f.amplitude_norm() == doctest::Approx(2.0));
    CHECK(ExpPoly(c).amplitude_norm() == 0.0);
}
