#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "koopman/errors.hpp"
#include "koopman/parse.hpp"
#include "koopman/presets.hpp"
#include "koopman/spectrum.hpp"
#include "support/oracles.hpp"

using namespace koopman;

namespace {

SpectrumReport matrix_spectrum(const std::string& key, const PresetParams& params,
                               int D) {
    SystemPreset preset = make_preset(key, params);
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis basis(preset.system.chart, D);
    return spectrum(op, basis, preset.key);
}

bool has_entry(const SpectrumReport& r, Cplx value, int multiplicity, double tol) {
    for (const auto& e : r.entries)
        if (std::abs(e.value - value) <= tol) return e.multiplicity == multiplicity;
    return false;
}

}  // namespace

TEST_CASE("diagonal generator: matrix route equals the closed enumeration") {
    SystemPreset preset = make_preset("damped-toy", {.gamma = 1.0});
    SpectrumReport analytic = analytic_spectrum(preset, 6);
    SpectrumReport matrix = matrix_spectrum("damped-toy", {.gamma = 1.0}, 6);
    CHECK(matrix.basis_size == 28);
    CHECK(matrix.multiplicity_sum() == 28);
    SpectrumComparison cmp = compare_spectra(analytic, matrix, 1e-10);
    CHECK(cmp.unmatched == 0);
    CHECK(cmp.multiplicities_match);
    CHECK(cmp.max_abs_deviation <= 1e-10);
    for (const auto& e : matrix.entries) CHECK(std::abs(e.value.real()) <= 1e-10);
}

TEST_CASE("closed toy enumeration lists scaled integer levels") {
    SystemPreset preset = make_preset("damped-toy", {.gamma = 0.5});
    SpectrumReport r = analytic_spectrum(preset, 2);
    REQUIRE(r.entries.size() == 5);
    CHECK(has_entry(r, Cplx(0, 0), 2, 0.0));
    CHECK(has_entry(r, Cplx(0, 0.5), 1, 0.0));
    CHECK(has_entry(r, Cplx(0, -0.5), 1, 0.0));
    CHECK(has_entry(r, Cplx(0, 1.0), 1, 0.0));
    CHECK(has_entry(r, Cplx(0, -1.0), 1, 0.0));
    for (const auto& e : r.entries) {
        if (e.value == Cplx(0, 0.5)) {
            REQUIRE(e.labels.size() == 1);
            CHECK(e.labels[0] == "p");
        }
    }
}

TEST_CASE("monomial route agrees with the matrix route when diagonal") {
    SystemPreset preset = make_preset("damped-toy", {.gamma = 1.0});
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis basis(preset.system.chart, 5);
    SpectrumReport direct = monomial_spectrum(op, basis, preset.key);
    SpectrumReport dense = spectrum(op, basis, preset.key);
    SpectrumComparison cmp = compare_spectra(direct, dense, 1e-10);
    CHECK(cmp.unmatched == 0);
    CHECK(cmp.multiplicities_match);

    SystemPreset osc = make_preset("harmonic");
    FirstOrderOperator osc_op = build_liouville(osc.system);
    GradedBasis osc_basis(osc.system.chart, 3);
    CHECK_THROWS(monomial_spectrum(osc_op, osc_basis, "harmonic"));
}

TEST_CASE("rotation generator: degree-1 block and full spectrum") {
    SystemPreset preset = make_preset("harmonic", {.gamma = 0, .omega = 1.0});
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis basis(preset.system.chart, 3);

    auto blocks = matrix_on_basis(op, basis);
    REQUIRE(blocks.size() == 4);
    // degree-1 block over [p, x]
    CHECK(blocks[1](0, 0) == Cplx(0, 0));
    CHECK(blocks[1](0, 1) == Cplx(0, 1));
    CHECK(blocks[1](1, 0) == Cplx(0, -1));
    CHECK(blocks[1](1, 1) == Cplx(0, 0));
    auto [l1, l2] = oracles::eig2(blocks[1](0, 0), blocks[1](0, 1), blocks[1](1, 0),
                                  blocks[1](1, 1));
    CHECK(oracles::dist(l1, Cplx(1, 0)) < 1e-14);
    CHECK(oracles::dist(l2, Cplx(-1, 0)) < 1e-14);

    SpectrumReport analytic = analytic_spectrum(preset, 3);
    SpectrumReport dense = spectrum(op, basis, preset.key);
    SpectrumComparison cmp = compare_spectra(analytic, dense, 1e-10);
    CHECK(cmp.unmatched == 0);
    CHECK(cmp.multiplicities_match);
    CHECK(has_entry(dense, Cplx(0, 0), 2, 1e-10));
    CHECK(has_entry(dense, Cplx(1, 0), 2, 1e-10));
    CHECK(has_entry(dense, Cplx(-1, 0), 2, 1e-10));
    CHECK(has_entry(dense, Cplx(3, 0), 1, 1e-10));
}

TEST_CASE("closed rotation labels follow the operator action") {
    SystemPreset preset = make_preset("harmonic", {.gamma = 0, .omega = 2.0});
    SpectrumReport r = analytic_spectrum(preset, 1);
    for (const auto& e : r.entries) {
        if (e.value == Cplx(2, 0)) {
            REQUIRE(e.labels.size() == 1);
            CHECK(e.labels[0] == "z");
        }
        if (e.value == Cplx(-2, 0)) {
            REQUIRE(e.labels.size() == 1);
            CHECK(e.labels[0] == "zbar");
        }
    }
}

TEST_CASE("spiral generator: matrix route matches the index formula") {
    PresetParams params{.gamma = 0.5, .omega = 1.0};
    SystemPreset preset = make_preset("damped-oscillator", params);
    for (int D = 1; D <= 4; ++D) {
        SpectrumReport analytic = analytic_spectrum(preset, D);
        SpectrumReport matrix = matrix_spectrum("damped-oscillator", params, D);
        SpectrumComparison cmp = compare_spectra(analytic, matrix, 1e-10);
        CHECK(cmp.unmatched == 0);
        CHECK(cmp.multiplicities_match);
        CHECK(cmp.max_abs_deviation <= 1e-10);
    }
    SpectrumReport a1 = analytic_spectrum(preset, 1);
    REQUIRE(a1.entries.size() == 5);
    CHECK(has_entry(a1, Cplx(1, -0.5), 1, 1e-14));
    CHECK(has_entry(a1, Cplx(1, 0.5), 1, 1e-14));
    CHECK(has_entry(a1, Cplx(-1, -0.5), 1, 1e-14));
    CHECK(has_entry(a1, Cplx(-1, 0.5), 1, 1e-14));
    SpectrumReport a2 = analytic_spectrum(preset, 2);
    CHECK(has_entry(a2, Cplx(2, 0), 1, 1e-14));  // z1 z2
    SpectrumReport a4 = analytic_spectrum(preset, 4);
    CHECK(has_entry(a4, Cplx(2, 0), 3, 1e-14));  // joined by z1^2 z2 z2bar, z1 z1bar z2^2
}

TEST_CASE("spectra of real Hamiltonians pair lambda with -conj(lambda)") {
    for (const std::string& key : {"damped-toy", "harmonic", "damped-oscillator"}) {
        SystemPreset preset = make_preset(key, {.gamma = 0.7, .omega = 1.3});
        int D = key == "damped-oscillator" ? 4 : 6;
        SpectrumReport r = matrix_spectrum(key, preset.params, D);
        for (const auto& e : r.entries) {
            Cplx partner(-e.value.real(), e.value.imag());
            bool found = false;
            for (const auto& o : r.entries)
                if (std::abs(o.value - partner) <= 1e-8) {
                    found = true;
                    CHECK(o.multiplicity == e.multiplicity);
                }
            CHECK(found);
        }
    }
}

TEST_CASE("degree-raising generators are rejected with the offending monomial") {
    SystemPreset preset = make_preset("power-damped:2", {.gamma = 1.0});
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis basis(preset.system.chart, 3);
    CHECK_THROWS_AS(matrix_on_basis(op, basis), DegreeRaisingError);
    CHECK_THROWS_AS(matrix_on_basis_serial(op, basis), DegreeRaisingError);
    try {
        matrix_on_basis(op, basis);
    } catch (const DegreeRaisingError& e) {
        CHECK(e.monomial == "p");
        CHECK(std::string(e.what()).find("p") != std::string::npos);
    }
}

TEST_CASE("matrix assembly is identical serial and parallel") {
    SystemPreset preset = make_preset("damped-oscillator", {.gamma = 0.3, .omega = 1.1});
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis basis(preset.system.chart, 4);
    auto par = matrix_on_basis(op, basis);
    auto ser = matrix_on_basis_serial(op, basis);
    REQUIRE(par.size() == ser.size());
    for (std::size_t b = 0; b < par.size(); ++b) {
        REQUIRE(par[b].rows() == ser[b].rows());
        CHECK(par[b] == ser[b]);
    }
}

TEST_CASE("dressed bases are rejected by matrix assembly") {
    SystemPreset preset = make_preset("harmonic");
    FirstOrderOperator op = build_liouville(preset.system);
    GradedBasis dressedb(preset.system.chart, 2, true);
    CHECK_THROWS(matrix_on_basis(op, dressedb));
}

TEST_CASE("comparison flags unmatched entries across truncations") {
    SystemPreset preset = make_preset("damped-toy");
    SpectrumReport a = analytic_spectrum(preset, 2);
    SpectrumReport b = analytic_spectrum(preset, 3);
    SpectrumComparison cmp = compare_spectra(a, b, 1e-12);
    CHECK(cmp.unmatched > 0);
}

TEST_CASE("basis enumeration counts and blocks") {
    Chart c = Chart::canonical({"x"}, {"p"});
    GradedBasis b(c, 4);
    CHECK(b.size() == 15);
    CHECK(GradedBasis::count_for_degree(2, 3) == 4);
    CHECK(GradedBasis::count_for_degree(4, 4) == 35);
    auto [lo, hi] = b.degree_range(2);
    CHECK(hi - lo == 3);
    for (int i = lo; i < hi; ++i) CHECK(b.degree_of(i) == 2);
    CHECK(b.index_of({2, 1}) >= 0);
    CHECK(b.index_of({9, 9}) == -1);
    CHECK(b.monomial(0) == Polynomial::constant(c, 1.0));

    GradedBasis dressedb(c, 2, true);
    ExpPoly e = dressedb.element(1);
    REQUIRE(e.terms().size() == 1);
    CHECK(e.terms()[0].phase == gaussian_dressing_phase(c));
}
