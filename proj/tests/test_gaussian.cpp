#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "koopman/errors.hpp"
#include "koopman/gaussian.hpp"
#include "koopman/parse.hpp"
#include "support/oracles.hpp"

using namespace koopman;

namespace {

Chart zchart() { return Chart::conjugate_pairs({{"z", "zbar"}}); }
Chart xp() { return Chart::canonical({"x"}, {"p"}); }

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// z^n zbar^m e^{-z zbar / 2}
ExpPoly dressed_monomial(const Chart& z, int n, int m) {
    return ExpPoly::dressed(Polynomial::monomial(z, {n, m}, 1.0),
                            gaussian_dressing_phase(z));
}

}  // namespace

TEST_CASE("pair moments match quadrature and the factorial formula") {
    for (int n = 0; n <= 6; ++n) {
        for (int m = 0; m <= 6; ++m) {
            Cplx lib = gaussian_moment(n, m);
            Cplx ref = oracles::pair_moment_quadrature(n, m);
            CHECK(oracles::dist(lib, ref) < 1e-9 * (1.0 + std::abs(ref)));
            if (n == m)
                CHECK(lib.real() == doctest::Approx(M_PI * factorial(n)).epsilon(1e-14));
            else
                CHECK(lib == Cplx(0, 0));
        }
    }
}

TEST_CASE("integral of dressed pair monomials reproduces the moments") {
    Chart z = zchart();
    Polynomial weight = parse_polynomial(z, "-z*zbar");
    for (int n = 0; n <= 5; ++n)
        for (int m = 0; m <= 5; ++m) {
            ExpPoly f = ExpPoly::dressed(Polynomial::monomial(z, {n, m}, 1.0), weight);
            CHECK(oracles::dist(gaussian_integral(f), gaussian_moment(n, m)) <
                  1e-12 * (1.0 + std::abs(gaussian_moment(n, m))));
        }
}

TEST_CASE("line integrals with linear phase match quadrature") {
    Chart c = Chart::plain({"x"});
    const double b = 0.7;
    for (int k = 0; k <= 4; ++k) {
        ExpPoly f = ExpPoly::dressed(
            Polynomial::monomial(c, {k}, 1.0),
            parse_polynomial(c, "-x^2 + 0.7*x"));
        Cplx ref = oracles::hermite_integral_1d(
            48, [&](double x) { return std::pow(x, k) * std::exp(b * x); });
        CHECK(oracles::dist(gaussian_integral(f), ref) < 1e-9 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("pair integrals with linear phase match quadrature") {
    Chart z = zchart();
    const Cplx beta(0.3, 0.2), delta(-0.1, 0.4);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            Polynomial phase = parse_polynomial(z, "-z*zbar");
            phase += Polynomial::monomial(z, {1, 0}, beta);
            phase += Polynomial::monomial(z, {0, 1}, delta);
            ExpPoly f = ExpPoly::dressed(Polynomial::monomial(z, {a, b}, 1.0), phase);
            Cplx ref = oracles::hermite_integral_2d(40, [&](double x, double p) {
                Cplx zv(x, p);
                return std::pow(zv, a) * std::pow(std::conj(zv), b) *
                       std::exp(beta * zv + delta * std::conj(zv));
            });
            CHECK(oracles::dist(gaussian_integral(f), ref) < 1e-9 * (1.0 + std::abs(ref)));
        }
}

TEST_CASE("real-pair Gaussian with both coordinates integrates separably") {
    Chart c = xp();
    ExpPoly f = ExpPoly::dressed(parse_polynomial(c, "x^2*p^2 + 1"),
                                 parse_polynomial(c, "-x^2 - 2*p^2"));
    Cplx ref = oracles::hermite_integral_2d(32, [&](double x, double p) {
        return (x * x * p * p + 1.0) * std::exp(-p * p);
    });
    CHECK(oracles::dist(gaussian_integral(f), ref) < 1e-9 * (1.0 + std::abs(ref)));
}

TEST_CASE("dressed monomial pairings follow the selection rule") {
    Chart z = zchart();
    // <f_nm, f_kl> = pi (m+k)! when n - m = k - l, else 0
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m)
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l) {
                    Cplx got = weighted_inner(dressed_monomial(z, n, m),
                                              dressed_monomial(z, k, l));
                    Cplx want = (n - m == k - l) ? Cplx(M_PI * factorial(m + k), 0)
                                                 : Cplx(0, 0);
                    CHECK(oracles::dist(got, want) < 1e-12 * (1.0 + std::abs(want)));
                }
}

TEST_CASE("normalized pairings form the closed ratio table") {
    Chart z = zchart();
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m)
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l) {
                    double nf = std::sqrt(M_PI * factorial(n + m));
                    double nk = std::sqrt(M_PI * factorial(k + l));
                    Cplx got = weighted_inner(dressed_monomial(z, n, m) * Cplx(1.0 / nf, 0),
                                              dressed_monomial(z, k, l) * Cplx(1.0 / nk, 0));
                    Cplx want = (n - m == k - l)
                                    ? Cplx(factorial(m + k) /
                                               std::sqrt(factorial(n + m) * factorial(k + l)),
                                           0)
                                    : Cplx(0, 0);
                    CHECK(oracles::dist(got, want) < 1e-12 * (1.0 + std::abs(want)));
                }
}

TEST_CASE("pairing is conjugate symmetric and linear in the second slot") {
    Chart z = zchart();
    ExpPoly f = dressed_monomial(z, 2, 1) * Cplx(1, 1) + dressed_monomial(z, 0, 1);
    ExpPoly g = dressed_monomial(z, 1, 0) * Cplx(0, -2) + dressed_monomial(z, 2, 1);
    ExpPoly h = dressed_monomial(z, 1, 2);
    CHECK(oracles::dist(weighted_inner(f, g), std::conj(weighted_inner(g, f))) < 1e-12);
    CHECK(oracles::dist(weighted_inner(f, g + h),
                        weighted_inner(f, g) + weighted_inner(f, h)) < 1e-12);
    CHECK(oracles::dist(weighted_inner(f, g * Cplx(0, 3)),
                        Cplx(0, 3) * weighted_inner(f, g)) < 1e-12);
    CHECK(weighted_inner(f, f).real() > 0.0);
    CHECK(std::abs(weighted_inner(f, f).imag()) < 1e-12);
}

TEST_CASE("phases without decay raise the divergence error") {
    Chart z = zchart();
    Chart c = xp();
    CHECK_THROWS_AS(gaussian_integral(ExpPoly::of(Polynomial::coordinate(z, "z"))),
                    DivergentPairingError);
    CHECK_THROWS_AS(gaussian_integral(ExpPoly::of(Polynomial::constant(c, 1.0))),
                    DivergentPairingError);
    CHECK_THROWS_AS(
        gaussian_integral(ExpPoly::dressed(Polynomial::constant(z, 1.0),
                                           parse_polynomial(z, "z*zbar"))),
        DivergentPairingError);
    CHECK_THROWS_AS(
        gaussian_integral(ExpPoly::dressed(Polynomial::constant(c, 1.0),
                                           parse_polynomial(c, "-x^2 + p^2"))),
        DivergentPairingError);
}

TEST_CASE("unsupported phase shapes are rejected") {
    Chart c = xp();
    CHECK_THROWS_AS(
        gaussian_integral(ExpPoly::dressed(Polynomial::constant(c, 1.0),
                                           parse_polynomial(c, "-x^2 - p^2 + x*p"))),
        std::invalid_argument);
    CHECK_THROWS_AS(
        gaussian_integral(ExpPoly::dressed(Polynomial::constant(c, 1.0),
                                           parse_polynomial(c, "-x^2 - p^2 - x^3"))),
        std::invalid_argument);
}

TEST_CASE("dressing phase matches the chart") {
    Chart c = xp();
    CHECK(gaussian_dressing_phase(c) == parse_polynomial(c, "-0.5*x^2 - 0.5*p^2"));
    Chart z = zchart();
    CHECK(gaussian_dressing_phase(z) == parse_polynomial(z, "-0.5*z*zbar"));
    CHECK(oracles::dist(gaussian_integral(ExpPoly::dressed(
                            Polynomial::constant(z, 1.0 / M_PI),
                            gaussian_dressing_phase(z) * Cplx(2, 0))),
                        Cplx(1, 0)) < 1e-15);
}
