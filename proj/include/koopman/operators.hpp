#pragma once

#include <string>
#include <vector>

#include "koopman/chart_map.hpp"
#include "koopman/exppoly.hpp"
#include "koopman/lift.hpp"

namespace koopman {

// First-order differential operator  sum_i c_i(u) d/du_i + c_0(u)  with
// polynomial coefficients over one chart.
class FirstOrderOperator {
  public:
    explicit FirstOrderOperator(Chart chart);
    FirstOrderOperator(Chart chart, std::vector<Polynomial> coeffs,
                       Polynomial zeroth);

    const Chart& chart() const { return chart_; }
    const Polynomial& coefficient(int coord) const { return coeffs_.at(coord); }
    const Polynomial& coefficient(std::string_view name) const;
    const std::vector<Polynomial>& coefficients() const { return coeffs_; }
    const Polynomial& zeroth() const { return zeroth_; }

    void set_coefficient(int coord, Polynomial c);
    void set_zeroth(Polynomial z);

    ExpPoly apply(const ExpPoly& f) const;
    Polynomial apply(const Polynomial& f) const;

    // sum_i d c_i / du_i; vanishes identically for Hamiltonian flows.
    Polynomial divergence() const;

    // Chain rule under an affine chart map: coefficients are rewritten over
    // the new chart and recombined with the constant Jacobian.
    FirstOrderOperator transformed(const ChartMap& map) const;

    FirstOrderOperator operator+(const FirstOrderOperator& o) const;
    FirstOrderOperator operator*(Cplx s) const;

    std::string to_text() const;  // e.g. "(1i*p)*d/dx + (-1i*x)*d/dp"

  private:
    Chart chart_;
    std::vector<Polynomial> coeffs_;
    Polynomial zeroth_;
};

// The premultiplied generator i L_H on H's canonical chart. Sign convention:
// the coefficient of d/dx_k is +i dH/dp_k and of d/dp_k is -i dH/dx_k, so
// i L_H f = i {f, H} and eigenfunctions evolve as U(t) f = e^{-i lambda t} f.
FirstOrderOperator build_liouville(const Polynomial& hamiltonian);
FirstOrderOperator build_liouville(const HamiltonianSystem& system);

// Complex scaling V_lambda on the designated pair: first_name -> e^{-i
// lambda} first_name, second_name -> e^{+i lambda} second_name. For
// operators the derivative directions pick up the inverse factors.
Polynomial complex_scale(const Polynomial& f, double lambda,
                         std::string_view first_name, std::string_view second_name);
ExpPoly complex_scale(const ExpPoly& f, double lambda, std::string_view first_name,
                      std::string_view second_name);
FirstOrderOperator complex_scale(const FirstOrderOperator& op, double lambda,
                                 std::string_view first_name,
                                 std::string_view second_name);

}  // namespace koopman
