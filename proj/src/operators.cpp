#include "koopman/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

FirstOrderOperator::FirstOrderOperator(Chart chart)
    : chart_(std::move(chart)),
      coeffs_(chart_.dim(), Polynomial(chart_)),
      zeroth_(chart_) {}

FirstOrderOperator::FirstOrderOperator(Chart chart, std::vector<Polynomial> coeffs,
                                       Polynomial zeroth)
    : chart_(std::move(chart)), coeffs_(std::move(coeffs)), zeroth_(std::move(zeroth)) {
    if (static_cast<int>(coeffs_.size()) != chart_.dim())
        throw std::invalid_argument("operator: one coefficient per coordinate");
    for (const auto& c : coeffs_)
        if (c.chart() != chart_) throw ChartMismatchError("operator coefficient chart");
    if (zeroth_.chart() != chart_) throw ChartMismatchError("operator zeroth chart");
}

const Polynomial& FirstOrderOperator::coefficient(std::string_view name) const {
    return coeffs_.at(chart_.index(name));
}

void FirstOrderOperator::set_coefficient(int coord, Polynomial c) {
    if (c.chart() != chart_) throw ChartMismatchError("operator coefficient chart");
    coeffs_.at(coord) = std::move(c);
}

void FirstOrderOperator::set_zeroth(Polynomial z) {
    if (z.chart() != chart_) throw ChartMismatchError("operator zeroth chart");
    zeroth_ = std::move(z);
}

ExpPoly FirstOrderOperator::apply(const ExpPoly& f) const {
    if (f.chart() != chart_) throw ChartMismatchError("operator applied across charts");
    ExpPoly r(chart_);
    for (int i = 0; i < chart_.dim(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        r += f.derivative(i) * coeffs_[i];
    }
    if (!zeroth_.is_zero()) r += f * zeroth_;
    return r;
}

Polynomial FirstOrderOperator::apply(const Polynomial& f) const {
    if (f.chart() != chart_) throw ChartMismatchError("operator applied across charts");
    Polynomial r(chart_);
    for (int i = 0; i < chart_.dim(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        r += coeffs_[i] * f.derivative(i);
    }
    if (!zeroth_.is_zero()) r += zeroth_ * f;
    return r;
}

Polynomial FirstOrderOperator::divergence() const {
    Polynomial d(chart_);
    for (int i = 0; i < chart_.dim(); ++i) d += coeffs_[i].derivative(i);
    return d;
}

FirstOrderOperator FirstOrderOperator::transformed(const ChartMap& map) const {
    if (map.old_chart() != chart_)
        throw ChartMismatchError("operator transform: map starts on another chart");
    const Chart& target = map.new_chart();
    FirstOrderOperator out(target);
    // d/du = sum_j (d w_j / d u) d/dw_j with constant Jacobian entries.
    for (int j = 0; j < target.dim(); ++j) {
        Polynomial cj(target);
        for (int u = 0; u < chart_.dim(); ++u) {
            Cplx a = map.jacobian(j, u);
            if (a == Cplx(0.0, 0.0) || coeffs_[u].is_zero()) continue;
            cj += a * map.to_new(coeffs_[u]);
        }
        out.set_coefficient(j, std::move(cj));
    }
    out.set_zeroth(map.to_new(zeroth_));
    return out;
}

FirstOrderOperator FirstOrderOperator::operator+(const FirstOrderOperator& o) const {
    if (chart_ != o.chart_) throw ChartMismatchError("operator sum across charts");
    std::vector<Polynomial> coeffs;
    for (int i = 0; i < chart_.dim(); ++i) coeffs.push_back(coeffs_[i] + o.coeffs_[i]);
    return FirstOrderOperator(chart_, std::move(coeffs), zeroth_ + o.zeroth_);
}

FirstOrderOperator FirstOrderOperator::operator*(Cplx s) const {
    std::vector<Polynomial> coeffs;
    for (const auto& c : coeffs_) coeffs.push_back(c * s);
    return FirstOrderOperator(chart_, std::move(coeffs), zeroth_ * s);
}

std::string FirstOrderOperator::to_text() const {
    std::string out;
    for (int i = 0; i < chart_.dim(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + coeffs_[i].to_text() + ")*d/d" + chart_.name(i);
    }
    if (!zeroth_.is_zero()) {
        if (!out.empty()) out += " + ";
        out += "(" + zeroth_.to_text() + ")";
    }
    return out.empty() ? "0" : out;
}

FirstOrderOperator build_liouville(const Polynomial& hamiltonian) {
    const Chart& chart = hamiltonian.chart();
    if (chart.kind() != ChartKind::canonical)
        throw std::invalid_argument("liouville generator requires a canonical chart");
    const Cplx i(0.0, 1.0);
    FirstOrderOperator op(chart);
    for (int k = 0; k < chart.pair_count(); ++k) {
        const int x = chart.base_index(k), p = chart.momentum_index(k);
        op.set_coefficient(x, i * hamiltonian.derivative(p));
        op.set_coefficient(p, (-i) * hamiltonian.derivative(x));
    }
    return op;
}

FirstOrderOperator build_liouville(const HamiltonianSystem& system) {
    return build_liouville(system.hamiltonian);
}

namespace {

// Per-term factor e^{i lambda (e_second - e_first)}.
Polynomial scale_terms(const Polynomial& f, double lambda, int first, int second) {
    Polynomial r(f.chart());
    for (const auto& [e, c] : f.terms()) {
        const int k = e[second] - e[first];
        Cplx factor = k == 0 ? Cplx(1.0, 0.0) : std::polar(1.0, lambda * k);
        r.add_term(e, c * factor);
    }
    return r;
}

}  // namespace

Polynomial complex_scale(const Polynomial& f, double lambda,
                         std::string_view first_name, std::string_view second_name) {
    return scale_terms(f, lambda, f.chart().index(first_name),
                       f.chart().index(second_name));
}

ExpPoly complex_scale(const ExpPoly& f, double lambda, std::string_view first_name,
                      std::string_view second_name) {
    const int a = f.chart().index(first_name), b = f.chart().index(second_name);
    ExpPoly r(f.chart());
    for (const auto& t : f.terms())
        r += ExpPoly::dressed(scale_terms(t.amplitude, lambda, a, b),
                              scale_terms(t.phase, lambda, a, b));
    return r;
}

FirstOrderOperator complex_scale(const FirstOrderOperator& op, double lambda,
                                 std::string_view first_name,
                                 std::string_view second_name) {
    const Chart& chart = op.chart();
    const int a = chart.index(first_name), b = chart.index(second_name);
    FirstOrderOperator out(chart);
    for (int i = 0; i < chart.dim(); ++i) {
        Polynomial c = scale_terms(op.coefficient(i), lambda, a, b);
        // d/d(first) scales inversely to first itself, likewise for second.
        if (i == a) c *= std::polar(1.0, lambda);
        if (i == b) c *= std::polar(1.0, -lambda);
        out.set_coefficient(i, std::move(c));
    }
    out.set_zeroth(scale_terms(op.zeroth(), lambda, a, b));
    return out;
}

}  // namespace koopman
