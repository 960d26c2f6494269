#pragma once

#include <complex>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "koopman/chart.hpp"

namespace koopman {

using Cplx = std::complex<double>;

// Exponent vector, one entry per chart coordinate.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
    int s = 0;
    for (int e : a) s += e;
    return s;
}

// Graded lexicographic order: total degree first, then lexicographic on the
// exponent vector. This is the canonical term order everywhere (storage,
// serialization, basis enumeration).
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse polynomial over a fixed chart, stored as exponent vector -> complex
// coefficient with no explicitly zero coefficients. Coefficients are plain
// doubles, so arithmetic on integer and dyadic data is exact; comparisons
// involving irrational constants (1/sqrt 2, e^{i lambda}) use a documented
// 1e-12 tolerance in the tests instead of bitwise equality.
class Polynomial {
  public:
    using TermMap = std::map<MultiIndex, Cplx, GradedLexLess>;

    // Degree reported for the zero polynomial.
    static constexpr int kNegInfDegree = std::numeric_limits<int>::min();

    Polynomial() = default;  // zero over the empty chart
    explicit Polynomial(Chart chart) : chart_(std::move(chart)) {}

    static Polynomial constant(const Chart& chart, Cplx value);
    static Polynomial coordinate(const Chart& chart, std::string_view name);
    static Polynomial coordinate(const Chart& chart, int index);
    static Polynomial monomial(const Chart& chart, MultiIndex exps, Cplx coeff);

    const Chart& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }

    Cplx coefficient(const MultiIndex& exps) const;
    // Constant term.
    Cplx constant_value() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(Cplx s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, Cplx s) { return a *= s; }
    friend Polynomial operator*(Cplx s, Polynomial a) { return a *= s; }

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial derivative(int coord) const;
    Polynomial derivative(std::string_view name) const;

    // Coefficient-wise complex conjugation combined with the chart's
    // involution (z <-> zbar on conjugate charts).
    Polynomial conjugate() const;

    Cplx evaluate(std::span<const Cplx> values) const;
    Cplx evaluate_real(std::span<const double> values) const;

    // Replace every coordinate by the given polynomial over `target`.
    Polynomial substitute(const std::vector<Polynomial>& images,
                          const Chart& target) const;

    // Pin a subset of coordinates to numeric values; the result stays on the
    // same chart with those exponents folded into the coefficients.
    Polynomial substitute_values(
        const std::vector<std::pair<std::string, Cplx>>& pins) const;

    // Canonical text form, graded-lex descending, e.g. "(3+2i)*x^2*p^1 + 2*x^1".
    std::string to_text() const;

    void add_term(MultiIndex exps, Cplx coeff);  // accumulate, keep canonical

  private:
    void check_same_chart(const Polynomial& o) const;

    Chart chart_;
    TermMap terms_;
};

// Canonical Poisson bracket {F, G} on a canonical chart.
Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g);

// Text for a bare monomial, e.g. "x^2*p" ("1" for the empty exponent).
std::string monomial_text(const Chart& chart, const MultiIndex& exps);

// Formats a complex coefficient the way to_text does: "3", "-2i", "(3+2i)".
std::string format_coefficient(Cplx c);

// Largest |a_term - b_term| over the union of term sets; charts must match.
double max_coeff_distance(const Polynomial& a, const Polynomial& b);

}  // namespace koopman
