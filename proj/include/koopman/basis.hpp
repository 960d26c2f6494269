#pragma once

#include <string>
#include <vector>

#include "koopman/exppoly.hpp"
#include "koopman/gaussian.hpp"

namespace koopman {

// All monomials of total degree <= D over a chart, graded-lex ordered and
// grouped into degree blocks. Optionally each element carries the standard
// Gaussian dressing e^{-(1/2) sum |z_i|^2}.
class GradedBasis {
  public:
    GradedBasis(Chart chart, int max_degree, bool dressed = false);

    const Chart& chart() const { return chart_; }
    int max_degree() const { return max_degree_; }
    bool dressed() const { return dressed_; }
    int size() const { return static_cast<int>(elements_.size()); }

    const MultiIndex& exponents(int i) const { return elements_.at(i); }
    int degree_of(int i) const { return total_degree(elements_.at(i)); }
    // Half-open index range [begin, end) of the degree-d block.
    std::pair<int, int> degree_range(int d) const;

    Polynomial monomial(int i) const;  // always undressed
    ExpPoly element(int i) const;      // dressed when the basis is
    std::string label(int i) const { return monomial_text(chart_, elements_[i]); }

    int index_of(const MultiIndex& exps) const;  // -1 if absent

    // Number of degree-d monomials in `dim` variables: C(d + dim - 1, dim - 1).
    static long count_for_degree(int dim, int d);

  private:
    Chart chart_;
    int max_degree_;
    bool dressed_;
    std::vector<MultiIndex> elements_;
    std::vector<std::pair<int, int>> ranges_;  // per degree
};

}  // namespace koopman
