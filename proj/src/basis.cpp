#include "koopman/basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace koopman {

namespace {

// Emits all exponent vectors of total degree d in ascending lexicographic
// order (which inside one degree block is graded-lex order).
void enumerate_degree(int dim, int d, MultiIndex& scratch, int coord,
                      std::vector<MultiIndex>& out) {
    if (coord == dim - 1) {
        scratch[coord] = d;
        out.push_back(scratch);
        return;
    }
    for (int e = 0; e <= d; ++e) {
        scratch[coord] = e;
        enumerate_degree(dim, d - e, scratch, coord + 1, out);
    }
}

}  // namespace

GradedBasis::GradedBasis(Chart chart, int max_degree, bool dressed)
    : chart_(std::move(chart)), max_degree_(max_degree), dressed_(dressed) {
    if (max_degree < 0) throw std::invalid_argument("basis: negative degree bound");
    if (chart_.dim() == 0) throw std::invalid_argument("basis: empty chart");
    MultiIndex scratch(chart_.dim(), 0);
    for (int d = 0; d <= max_degree_; ++d) {
        const int begin = static_cast<int>(elements_.size());
        enumerate_degree(chart_.dim(), d, scratch, 0, elements_);
        ranges_.emplace_back(begin, static_cast<int>(elements_.size()));
    }
}

std::pair<int, int> GradedBasis::degree_range(int d) const {
    if (d < 0 || d > max_degree_)
        throw std::out_of_range("basis: degree outside [0, D]");
    return ranges_[d];
}

Polynomial GradedBasis::monomial(int i) const {
    return Polynomial::monomial(chart_, elements_.at(i), Cplx(1.0, 0.0));
}

ExpPoly GradedBasis::element(int i) const {
    if (!dressed_) return ExpPoly::of(monomial(i));
    return ExpPoly::dressed(monomial(i), gaussian_dressing_phase(chart_));
}

int GradedBasis::index_of(const MultiIndex& exps) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), exps,
                               GradedLexLess{});
    if (it == elements_.end() || *it != exps) return -1;
    return static_cast<int>(it - elements_.begin());
}

long GradedBasis::count_for_degree(int dim, int d) {
    long r = 1;
    // C(d + dim - 1, dim - 1)
    for (int j = 1; j <= dim - 1; ++j) r = r * (d + j) / j;
    return r;
}

}  // namespace koopman
