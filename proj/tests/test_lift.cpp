#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "koopman/lift.hpp"
#include "koopman/parse.hpp"
#include "support/oracles.hpp"

using namespace koopman;

namespace {

VectorField random_field(std::mt19937_64& rng, int dim, int max_degree) {
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
    Chart c = Chart::plain(names);
    VectorField f{c, {}, "random"};
    for (int i = 0; i < dim; ++i)
        f.components.push_back(oracles::random_integer_polynomial(rng, c, max_degree, 4));
    return f;
}

}  // namespace

TEST_CASE("momentum names pair with base names") {
    CHECK(momentum_name_for("x") == "p");
    CHECK(momentum_name_for("x2") == "p2");
    CHECK(momentum_name_for("y") == "p_y");
}

TEST_CASE("one-dimensional contraction lifts to the product Hamiltonian") {
    Chart b = Chart::plain({"x"});
    VectorField field{b, {parse_polynomial(b, "-x")}, "contraction"};
    HamiltonianSystem sys = lift_vector_field(field);
    CHECK(sys.chart == Chart::canonical({"x"}, {"p"}));
    CHECK(sys.hamiltonian == parse_polynomial(sys.chart, "-x*p"));
    REQUIRE(sys.equations.size() == 2);
    CHECK(sys.equations[0] == parse_polynomial(sys.chart, "-x"));
    CHECK(sys.equations[1] == parse_polynomial(sys.chart, "p"));
}

TEST_CASE("planar rotation-dilation lifts to a four-dimensional system") {
    Chart b = Chart::plain({"x1", "x2"});
    VectorField field{b,
                      {parse_polynomial(b, "-x1 + 2*x2"),
                       parse_polynomial(b, "-2*x1 - x2")},
                      "spiral"};
    HamiltonianSystem sys = lift_vector_field(field);
    CHECK(sys.chart.dim() == 4);
    CHECK(sys.hamiltonian ==
          parse_polynomial(sys.chart, "-x1*p1 + 2*x2*p1 - 2*x1*p2 - x2*p2"));
    auto base = base_equations(sys);
    REQUIRE(base.size() == 2);
    for (int k = 0; k < 2; ++k) {
        Polynomial want = field.components[k].substitute(
            {Polynomial::coordinate(sys.chart, 0), Polynomial::coordinate(sys.chart, 1)},
            sys.chart);
        CHECK(base[k] == want);
    }
    // momentum block feels the transposed Jacobian
    CHECK(sys.equations[2] == parse_polynomial(sys.chart, "p1 + 2*p2"));
    CHECK(sys.equations[3] == parse_polynomial(sys.chart, "-2*p1 + p2"));
}

TEST_CASE("lift round-trip recovers the base components exactly") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 30; ++round) {
        int dim = 1 + static_cast<int>(rng() % 3);
        VectorField field = random_field(rng, dim, 3);
        HamiltonianSystem sys = lift_vector_field(field);
        auto base = base_equations(sys);
        REQUIRE(static_cast<int>(base.size()) == dim);
        std::vector<Polynomial> embed;
        for (int i = 0; i < dim; ++i)
            embed.push_back(Polynomial::coordinate(sys.chart, i));
        for (int k = 0; k < dim; ++k)
            CHECK(base[k] == field.components[k].substitute(embed, sys.chart));
        // base block of a cotangent lift never involves momenta
        for (int k = 0; k < dim; ++k)
            for (const auto& [e, cf] : base[k].terms())
                for (int j = dim; j < sys.chart.dim(); ++j) CHECK(e[j] == 0);
    }
}

TEST_CASE("lifting is additive in the field") {
    std::mt19937_64 rng(43);
    VectorField a = random_field(rng, 2, 3);
    VectorField b = random_field(rng, 2, 3);
    VectorField sum = a;
    for (int k = 0; k < 2; ++k) sum.components[k] += b.components[k];
    CHECK(lift_vector_field(sum).hamiltonian ==
          lift_vector_field(a).hamiltonian + lift_vector_field(b).hamiltonian);
}

TEST_CASE("momentum dual field matches the momentum block of the equations") {
    std::mt19937_64 rng(47);
    for (int round = 0; round < 10; ++round) {
        VectorField field = random_field(rng, 2, 3);
        HamiltonianSystem sys = lift_vector_field(field);
        auto dual = momentum_dual_field(field);
        REQUIRE(dual.size() == 2);
        CHECK(dual[0] == sys.equations[2]);
        CHECK(dual[1] == sys.equations[3]);
    }
}

TEST_CASE("hamilton equations conserve the energy exactly") {
    std::mt19937_64 rng(53);
    Chart c = Chart::canonical({"x1", "x2"}, {"p1", "p2"});
    for (int round = 0; round < 20; ++round) {
        Polynomial h = oracles::random_integer_polynomial(rng, c, 4, 5);
        auto eq = hamilton_equations(h);
        REQUIRE(static_cast<int>(eq.size()) == c.dim());
        Polynomial drift(c);
        for (int i = 0; i < c.dim(); ++i) drift += eq[i] * h.derivative(i);
        CHECK(drift.is_zero());
    }
}

TEST_CASE("make_system wires a plain Hamiltonian") {
    Chart c = Chart::canonical({"x"}, {"p"});
    HamiltonianSystem sys = make_system(parse_polynomial(c, "0.5*x^2 + 0.5*p^2"), "osc");
    CHECK(sys.name == "osc");
    CHECK(sys.equations[0] == parse_polynomial(c, "p"));
    CHECK(sys.equations[1] == parse_polynomial(c, "-x"));
}
