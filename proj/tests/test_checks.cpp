#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "koopman/checks.hpp"
#include "koopman/errors.hpp"
#include "koopman/parse.hpp"
#include "koopman/presets.hpp"
#include "support/oracles.hpp"

using namespace koopman;
using oracles::dist;

namespace {

ExpPoly dress(const Polynomial& amplitude) {
    return ExpPoly::dressed(amplitude, gaussian_dressing_phase(amplitude.chart()));
}

// Same pairing as weighted_inner, through Gauss-Hermite quadrature instead
// of moment tables.
Cplx inner_by_quadrature(const ExpPoly& f, const ExpPoly& g, int nodes) {
    return oracles::hermite_integral_2d(nodes, [&](double x, double p) {
        const std::vector<double> pt{x, p};
        return std::conj(f.evaluate_real(pt)) * g.evaluate_real(pt) *
               std::exp(x * x + p * p);
    });
}

}  // namespace

TEST_CASE("pairing asymmetry of a skew operator matches the quadrature oracle") {
    const Chart chart = Chart::canonical({"x"}, {"p"});
    FirstOrderOperator ddx(chart);
    ddx.set_coefficient(0, Polynomial::constant(chart, 1.0));

    const ExpPoly f = dress(parse_polynomial(chart, "x^2 + 2*p"));
    const ExpPoly g = dress(parse_polynomial(chart, "x*p - 1i*x"));

    const Cplx direct = selfadjointness_residual(ddx, f, g);
    const Cplx oracle = inner_by_quadrature(f, ddx.apply(g), 24) -
                        inner_by_quadrature(ddx.apply(f), g, 24);
    CHECK(dist(direct, oracle) < 1e-9);
    CHECK(std::abs(direct) > 0.1);  // genuinely asymmetric
}

TEST_CASE("generators of complete flows are self-adjoint in the pairing") {
    const SystemPreset toy = make_preset("damped-toy");
    const FirstOrderOperator op = build_liouville(toy.system);
    const Chart& chart = toy.system.chart;

    const ExpPoly f = dress(Polynomial::coordinate(chart, "x"));
    const ExpPoly g = dress(Polynomial::coordinate(chart, "p"));
    CHECK(selfadjointness_residual(op, f, g) == Cplx(0.0, 0.0));

    const SystemPreset osc = make_preset("harmonic");
    const FirstOrderOperator osc_op = build_liouville(osc.system);
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        const Polynomial a =
            oracles::random_integer_polynomial(rng, osc.system.chart, 3, 4);
        const Polynomial b =
            oracles::random_integer_polynomial(rng, osc.system.chart, 3, 4);
        const ExpPoly fa = dress(a), gb = dress(b);
        const double scale = 1.0 + std::abs(weighted_inner(fa, osc_op.apply(gb)));
        CHECK(std::abs(selfadjointness_residual(osc_op, fa, gb)) <= 1e-12 * scale);
    }
}

TEST_CASE("real multiplication operators are exactly symmetric") {
    const Chart chart = Chart::canonical({"x"}, {"p"});
    FirstOrderOperator mult(chart);
    mult.set_zeroth(Polynomial::coordinate(chart, "x"));

    std::mt19937_64 rng(77);
    for (int round = 0; round < 10; ++round) {
        const ExpPoly f = dress(oracles::random_integer_polynomial(rng, chart, 3, 4));
        const ExpPoly g = dress(oracles::random_integer_polynomial(rng, chart, 3, 4));
        CHECK(selfadjointness_residual(mult, f, g) == Cplx(0.0, 0.0));
    }
}

TEST_CASE("undressed arguments raise the divergent-pairing error") {
    const Chart chart = Chart::canonical({"x"}, {"p"});
    FirstOrderOperator op(chart);
    op.set_coefficient(0, Polynomial::constant(chart, 1.0));
    const ExpPoly f = ExpPoly::of(Polynomial::coordinate(chart, "x"));
    CHECK_THROWS_AS(selfadjointness_residual(op, f, f), DivergentPairingError);
}

TEST_CASE("plane waves pass the pinned eigencheck for the free flow") {
    const SystemPreset free = make_preset("free-particle");
    const Chart& chart = free.system.chart;
    // i/(2m) p . grad_x, the halved generator whose eigenvalue is |k|^2/2m.
    const FirstOrderOperator half_op =
        build_liouville(free.system) * Cplx(0.5, 0.0);

    const std::vector<double> k{1.0, 0.0, 0.0};
    Polynomial phase(chart);
    for (int j = 0; j < 3; ++j)
        phase += Polynomial::coordinate(chart, j) * Cplx(0.0, -k[j]);
    const ExpPoly wave = ExpPoly::dressed(Polynomial::constant(chart, 1.0), phase);

    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const std::vector<std::pair<std::string, Cplx>> pins{
        {"p1", k[0]}, {"p2", k[1]}, {"p3", k[2]}};

    const Polynomial residual =
        distributional_eigencheck(half_op, wave, Cplx(k2 / 2.0, 0.0), pins);
    CHECK(residual.is_zero());

    // The full generator pairs with lambda = |k|^2 / m.
    const Polynomial full_residual = distributional_eigencheck(
        build_liouville(free.system), wave, Cplx(k2, 0.0), pins);
    CHECK(full_residual.is_zero());

    // k = 0: constant function, eigenvalue 0.
    const ExpPoly flat = ExpPoly::of(Polynomial::constant(chart, 1.0));
    CHECK(distributional_eigencheck(half_op, flat, Cplx(0.0, 0.0), {}).is_zero());
}

TEST_CASE("pinned eigencheck flags the wrong generator") {
    const SystemPreset toy = make_preset("damped-toy");
    const Chart& chart = toy.system.chart;
    const FirstOrderOperator op = build_liouville(toy.system);

    const double k = 1.0;
    const ExpPoly wave = ExpPoly::dressed(
        Polynomial::constant(chart, 1.0),
        Polynomial::coordinate(chart, "x") * Cplx(0.0, -k));
    const Polynomial residual = distributional_eigencheck(
        op, wave, Cplx(k * k / 2.0, 0.0), {{"p", Cplx(k, 0.0)}});
    CHECK_FALSE(residual.is_zero());
}

TEST_CASE("rotation picture: i L equals i omega times the angular derivative") {
    const Chart chart = Chart::canonical({"x"}, {"p"});
    const Polynomial f = parse_polynomial(chart, "x^2*p");
    const double residual =
        representation_check(AngularForm::rotation, ExpPoly::of(f), 1.0, 100);
    CHECK(residual <= 1e-6);

    // Nontrivial omega and a dressed observable.
    const double dressed_residual = representation_check(
        AngularForm::rotation, dress(parse_polynomial(chart, "x*p - 2*x")), 1.7, 60);
    CHECK(dressed_residual <= 1e-6);

    const double flat = representation_check(
        AngularForm::rotation, ExpPoly::of(Polynomial::constant(chart, 3.0)), 1.0, 20);
    CHECK(flat <= 1e-12);
}

TEST_CASE("boost picture: i L equals i gamma times the rapidity derivative") {
    const Chart chart = Chart::canonical({"X"}, {"P"});
    const Polynomial f = parse_polynomial(chart, "X*P");
    CHECK(representation_check(AngularForm::boost, ExpPoly::of(f), 0.5, 100) <= 1e-6);
    CHECK(representation_check(AngularForm::boost,
                               ExpPoly::of(parse_polynomial(chart, "X^2 + P^2")),
                               1.3, 100) <= 1e-6);
}

TEST_CASE("completeness classification over the damping template") {
    const Chart chart = Chart::canonical({"x"}, {"p"});
    const auto linear = completeness_classify(parse_polynomial(chart, "-0.5*x*p"));
    CHECK(linear.kind == CompletenessResult::Kind::complete);
    CHECK(linear.power == 1);

    const auto quadratic = completeness_classify(parse_polynomial(chart, "-x^2*p"));
    CHECK(quadratic.kind == CompletenessResult::Kind::incomplete);
    CHECK(quadratic.power == 2);
    CHECK(quadratic.detail.find("t*") != std::string::npos);

    const auto quintic = completeness_classify(parse_polynomial(chart, "-2*x^5*p"));
    CHECK(quintic.kind == CompletenessResult::Kind::incomplete);
    CHECK(quintic.power == 5);

    // Off-template inputs come back unclassified instead of throwing.
    const auto harmonic =
        completeness_classify(parse_polynomial(chart, "0.5*x^2 + 0.5*p^2"));
    CHECK(harmonic.kind == CompletenessResult::Kind::unclassified);
    const auto expanding = completeness_classify(parse_polynomial(chart, "x*p"));
    CHECK(expanding.kind == CompletenessResult::Kind::unclassified);
    const auto wrong_dual = completeness_classify(parse_polynomial(chart, "-x*p^2"));
    CHECK(wrong_dual.kind == CompletenessResult::Kind::unclassified);
}

TEST_CASE("classified escape law matches the integrated blow-up time") {
    // For xdot = -c x^n, x0 > 0, n even: backward escape at
    // t* = -1/((n-1) c x0^(n-1)). Forward Euler march toward the pole.
    const double c = 1.0, x0 = 1.0;
    const int n = 2;
    const double tstar = -1.0 / ((n - 1) * c * std::pow(x0, n - 1));

    double t = 0.0, x = x0, dt = -1e-5;
    int guard = 0;
    while (std::abs(x) < 1e6 && guard++ < 2000000) {
        x += dt * (-c * std::pow(x, n));
        t += dt;
    }
    CHECK(std::abs(t - tstar) < 1e-2);

    const Chart chart = Chart::canonical({"x"}, {"p"});
    const auto result = completeness_classify(parse_polynomial(chart, "-x^2*p"));
    CHECK(result.detail.find("-1/(1 x0^1)") != std::string::npos);
}
