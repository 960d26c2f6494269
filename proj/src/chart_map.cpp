#include "koopman/chart_map.hpp"

#include <cmath>
#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

namespace {
constexpr double kRoundTripTol = 1e-12;
}

ChartMap::ChartMap(Chart old_chart, Chart new_chart,
                   std::vector<Polynomial> new_in_old,
                   std::vector<Polynomial> old_in_new)
    : old_(std::move(old_chart)),
      new_(std::move(new_chart)),
      new_in_old_(std::move(new_in_old)),
      old_in_new_(std::move(old_in_new)) {
    if (static_cast<int>(new_in_old_.size()) != new_.dim() ||
        static_cast<int>(old_in_new_.size()) != old_.dim())
        throw std::invalid_argument("chart map: one image per coordinate required");
    for (const auto& f : new_in_old_) {
        if (f.chart() != old_) throw ChartMismatchError("chart map image chart");
        if (f.degree() > 1)
            throw std::invalid_argument("chart map: non-affine image " + f.to_text());
    }
    for (const auto& f : old_in_new_) {
        if (f.chart() != new_) throw ChartMismatchError("chart map image chart");
        if (f.degree() > 1)
            throw std::invalid_argument("chart map: non-affine image " + f.to_text());
    }
    // Round-trip check: every coordinate must come back to itself.
    for (int i = 0; i < old_.dim(); ++i) {
        Polynomial back = old_in_new_[i].substitute(new_in_old_, old_);
        if (max_coeff_distance(back, Polynomial::coordinate(old_, i)) > kRoundTripTol)
            throw std::invalid_argument("chart map: directions do not invert on " +
                                        old_.name(i));
    }
    for (int j = 0; j < new_.dim(); ++j) {
        Polynomial back = new_in_old_[j].substitute(old_in_new_, new_);
        if (max_coeff_distance(back, Polynomial::coordinate(new_, j)) > kRoundTripTol)
            throw std::invalid_argument("chart map: directions do not invert on " +
                                        new_.name(j));
    }
}

Polynomial ChartMap::to_new(const Polynomial& f) const {
    if (f.chart() != old_) throw ChartMismatchError("to_new: operand chart");
    return f.substitute(old_in_new_, new_);
}

Polynomial ChartMap::to_old(const Polynomial& f) const {
    if (f.chart() != new_) throw ChartMismatchError("to_old: operand chart");
    return f.substitute(new_in_old_, old_);
}

ExpPoly ChartMap::to_new(const ExpPoly& f) const {
    if (f.chart() != old_) throw ChartMismatchError("to_new: operand chart");
    return f.substitute(old_in_new_, new_);
}

ExpPoly ChartMap::to_old(const ExpPoly& f) const {
    if (f.chart() != new_) throw ChartMismatchError("to_old: operand chart");
    return f.substitute(new_in_old_, old_);
}

ChartMap ChartMap::inverse() const {
    return ChartMap(new_, old_, old_in_new_, new_in_old_);
}

Cplx ChartMap::jacobian(int new_j, int old_u) const {
    MultiIndex e(old_.dim(), 0);
    e[old_u] = 1;
    return new_in_old_[new_j].coefficient(e);
}

ChartMap ChartMap::complexification(const Chart& chart) {
    if (chart.kind() != ChartKind::canonical)
        throw std::invalid_argument("complexification requires a canonical chart");
    const int n = chart.pair_count();
    std::vector<std::pair<std::string, std::string>> pair_names;
    for (int k = 0; k < n; ++k) {
        std::string stem = n == 1 ? "z" : "z" + std::to_string(k + 1);
        pair_names.emplace_back(stem, stem + "bar");
    }
    Chart zchart = Chart::conjugate_pairs(pair_names);

    const Cplx i(0.0, 1.0), half(0.5, 0.0), halfi(0.0, -0.5);
    std::vector<Polynomial> fwd, inv;
    for (int k = 0; k < n; ++k) {
        Polynomial x = Polynomial::coordinate(chart, chart.base_index(k));
        Polynomial p = Polynomial::coordinate(chart, chart.momentum_index(k));
        fwd.push_back(x + i * p);  // z_k
        fwd.push_back(x - i * p);  // zbar_k
    }
    for (int k = 0; k < n; ++k) {
        Polynomial z = Polynomial::coordinate(zchart, 2 * k);
        Polynomial zb = Polynomial::coordinate(zchart, 2 * k + 1);
        inv.push_back(half * (z + zb));   // x_k = (z + zbar)/2
        inv.push_back(halfi * (z - zb));  // p_k = (z - zbar)/(2i)
    }
    // fwd is ordered (z1, z1bar, z2, ...) matching zchart, inv is ordered
    // (x1, .., xn, p1, .., pn) and must match the canonical chart layout.
    std::vector<Polynomial> old_in_new(chart.dim(), Polynomial(zchart));
    for (int k = 0; k < n; ++k) {
        old_in_new[chart.base_index(k)] = inv[2 * k];
        old_in_new[chart.momentum_index(k)] = inv[2 * k + 1];
    }
    return ChartMap(chart, zchart, std::move(fwd), std::move(old_in_new));
}

ChartMap ChartMap::planar_complexification(const Chart& chart) {
    if (chart.kind() != ChartKind::canonical || chart.pair_count() != 2)
        throw std::invalid_argument(
            "planar complexification requires a two-pair canonical chart");
    Chart zchart = Chart::conjugate_pairs({{"z1", "z1bar"}, {"z2", "z2bar"}});

    const Cplx i(0.0, 1.0);
    Polynomial x1 = Polynomial::coordinate(chart, chart.base_index(0));
    Polynomial x2 = Polynomial::coordinate(chart, chart.base_index(1));
    Polynomial p1 = Polynomial::coordinate(chart, chart.momentum_index(0));
    Polynomial p2 = Polynomial::coordinate(chart, chart.momentum_index(1));
    std::vector<Polynomial> fwd = {
        x1 + i * x2,        // z1
        x1 - i * x2,        // z1bar
        i * p1 - p2,        // z2 = i(p1 + i p2)
        (-i) * p1 - p2,     // z2bar
    };

    Polynomial z1 = Polynomial::coordinate(zchart, "z1");
    Polynomial z1b = Polynomial::coordinate(zchart, "z1bar");
    Polynomial z2 = Polynomial::coordinate(zchart, "z2");
    Polynomial z2b = Polynomial::coordinate(zchart, "z2bar");
    const Cplx half(0.5, 0.0), halfi(0.0, -0.5);
    std::vector<Polynomial> old_in_new(4, Polynomial(zchart));
    old_in_new[chart.base_index(0)] = half * (z1 + z1b);
    old_in_new[chart.base_index(1)] = halfi * (z1 - z1b);
    old_in_new[chart.momentum_index(0)] = halfi * (z2 - z2b);  // p1 = (z2 - z2bar)/(2i)
    old_in_new[chart.momentum_index(1)] = (-half) * (z2 + z2b);
    return ChartMap(chart, zchart, std::move(fwd), std::move(old_in_new));
}

ChartMap ChartMap::half_turn_to_squares(const Chart& chart) {
    if (chart.kind() != ChartKind::canonical || chart.pair_count() != 1)
        throw std::invalid_argument(
            "square normal form requires a one-pair canonical chart");
    Chart xp = Chart::canonical({"X"}, {"P"});
    const Cplx r(1.0 / std::sqrt(2.0), 0.0);
    Polynomial x = Polynomial::coordinate(chart, chart.base_index(0));
    Polynomial p = Polynomial::coordinate(chart, chart.momentum_index(0));
    std::vector<Polynomial> fwd = {r * (x + p), r * (x - p)};  // X, P
    Polynomial X = Polynomial::coordinate(xp, "X");
    Polynomial P = Polynomial::coordinate(xp, "P");
    std::vector<Polynomial> inv = {r * (X + P), r * (X - P)};  // x, p
    return ChartMap(chart, xp, std::move(fwd), std::move(inv));
}

}  // namespace koopman
