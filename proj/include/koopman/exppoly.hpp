#pragma once

#include <span>
#include <vector>

#include "koopman/polynomial.hpp"

namespace koopman {

// Finite sums  sum_j  P_j * exp(S_j)  with polynomial amplitudes P_j and
// phases S_j over one chart. Closed under addition, multiplication,
// differentiation, conjugation and affine substitution, which is all the
// eigenfunction work needs (Gaussian dressings, plane waves, e^{-xy} cores).
//
// Canonical form: constant phase terms are folded into the amplitude via
// exp(), amplitudes of equal phases are merged, zero amplitudes are dropped,
// terms are sorted by phase. A plain polynomial is a single term with zero
// phase.
class ExpPoly {
  public:
    struct Term {
        Polynomial amplitude;
        Polynomial phase;
    };

    ExpPoly() = default;
    explicit ExpPoly(Chart chart) : chart_(std::move(chart)) {}

    static ExpPoly of(const Polynomial& p);
    static ExpPoly dressed(const Polynomial& amplitude, const Polynomial& phase);

    const Chart& chart() const { return chart_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_polynomial() const;  // single zero-phase term or zero
    // The amplitude of the zero-phase part (zero polynomial if none).
    Polynomial polynomial_part() const;

    ExpPoly operator-() const;
    ExpPoly& operator+=(const ExpPoly& o);
    ExpPoly& operator-=(const ExpPoly& o);
    ExpPoly& operator*=(const ExpPoly& o);
    ExpPoly& operator*=(const Polynomial& p);
    ExpPoly& operator*=(Cplx s);

    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
    friend ExpPoly operator*(ExpPoly a, const ExpPoly& b) { return a *= b; }
    friend ExpPoly operator*(ExpPoly a, const Polynomial& p) { return a *= p; }
    friend ExpPoly operator*(ExpPoly a, Cplx s) { return a *= s; }
    friend ExpPoly operator*(Cplx s, ExpPoly a) { return a *= s; }

    bool operator==(const ExpPoly& o) const;
    bool operator!=(const ExpPoly& o) const { return !(*this == o); }

    // d/du (P e^S) = (dP/du + P dS/du) e^S.
    ExpPoly derivative(int coord) const;
    ExpPoly derivative(std::string_view name) const;

    ExpPoly conjugate() const;

    Cplx evaluate(std::span<const Cplx> values) const;
    Cplx evaluate_real(std::span<const double> values) const;

    // Replace every coordinate by an affine polynomial over `target`, in both
    // amplitudes and phases.
    ExpPoly substitute(const std::vector<Polynomial>& images,
                       const Chart& target) const;

    ExpPoly substitute_values(
        const std::vector<std::pair<std::string, Cplx>>& pins) const;

    std::string to_text() const;

    // Largest coefficient magnitude across amplitudes; crude size measure
    // used by residual tests.
    double amplitude_norm() const;

  private:
    void insert_term(Polynomial amplitude, Polynomial phase);
    void normalize();

    Chart chart_;
    std::vector<Term> terms_;
};

}  // namespace koopman
