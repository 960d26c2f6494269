#include "koopman/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

namespace {

// Total order on polynomials over one chart, used only to canonicalize the
// term list: compare term sequences as (exponents, re, im) tuples.
int poly_order(const Polynomial& a, const Polynomial& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    const GradedLexLess less;
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (less(ia->first, ib->first)) return -1;
        if (less(ib->first, ia->first)) return 1;
        if (ia->second.real() != ib->second.real())
            return ia->second.real() < ib->second.real() ? -1 : 1;
        if (ia->second.imag() != ib->second.imag())
            return ia->second.imag() < ib->second.imag() ? -1 : 1;
    }
    if (ia != a.terms().end()) return 1;
    if (ib != b.terms().end()) return -1;
    return 0;
}

}  // namespace

ExpPoly ExpPoly::of(const Polynomial& p) {
    ExpPoly r(p.chart());
    r.insert_term(p, Polynomial(p.chart()));
    r.normalize();
    return r;
}

ExpPoly ExpPoly::dressed(const Polynomial& amplitude, const Polynomial& phase) {
    if (amplitude.chart() != phase.chart())
        throw ChartMismatchError("amplitude and phase on different charts");
    ExpPoly r(amplitude.chart());
    r.insert_term(amplitude, phase);
    r.normalize();
    return r;
}

bool ExpPoly::is_polynomial() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].phase.is_zero());
}

Polynomial ExpPoly::polynomial_part() const {
    for (const auto& t : terms_)
        if (t.phase.is_zero()) return t.amplitude;
    return Polynomial(chart_);
}

void ExpPoly::insert_term(Polynomial amplitude, Polynomial phase) {
    if (amplitude.is_zero()) return;
    // Fold a constant phase offset into the amplitude so e^{S+c} and
    // e^{c} e^{S} canonicalize identically.
    Cplx c0 = phase.constant_value();
    if (c0 != Cplx(0.0, 0.0)) {
        phase.add_term(MultiIndex(chart_.dim(), 0), -c0);
        amplitude *= std::exp(c0);
    }
    terms_.push_back({std::move(amplitude), std::move(phase)});
}

void ExpPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        return poly_order(a.phase, b.phase) < 0;
    });
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && poly_order(merged.back().phase, t.phase) == 0)
            merged.back().amplitude += t.amplitude;
        else
            merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged)
        if (!t.amplitude.is_zero()) terms_.push_back(std::move(t));
}

ExpPoly ExpPoly::operator-() const {
    ExpPoly r(chart_);
    for (const auto& t : terms_) r.terms_.push_back({-t.amplitude, t.phase});
    return r;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
    if (chart_ != o.chart_) {
        if (terms_.empty() && chart_.dim() == 0) {
            *this = o;
            return *this;
        }
        throw ChartMismatchError("exp-polynomial operands on different charts");
    }
    for (const auto& t : o.terms_) insert_term(t.amplitude, t.phase);
    normalize();
    return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) { return *this += -o; }

ExpPoly& ExpPoly::operator*=(const ExpPoly& o) {
    if (chart_ != o.chart_)
        throw ChartMismatchError("exp-polynomial operands on different charts");
    ExpPoly r(chart_);
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            r.insert_term(a.amplitude * b.amplitude, a.phase + b.phase);
    r.normalize();
    *this = std::move(r);
    return *this;
}

ExpPoly& ExpPoly::operator*=(const Polynomial& p) {
    for (auto& t : terms_) t.amplitude *= p;
    normalize();
    return *this;
}

ExpPoly& ExpPoly::operator*=(Cplx s) {
    for (auto& t : terms_) t.amplitude *= s;
    normalize();
    return *this;
}

bool ExpPoly::operator==(const ExpPoly& o) const {
    if (chart_ != o.chart_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].amplitude != o.terms_[i].amplitude ||
            terms_[i].phase != o.terms_[i].phase)
            return false;
    return true;
}

ExpPoly ExpPoly::derivative(int coord) const {
    ExpPoly r(chart_);
    for (const auto& t : terms_)
        r.insert_term(t.amplitude.derivative(coord) +
                          t.amplitude * t.phase.derivative(coord),
                      t.phase);
    r.normalize();
    return r;
}

ExpPoly ExpPoly::derivative(std::string_view name) const {
    return derivative(chart_.index(name));
}

ExpPoly ExpPoly::conjugate() const {
    ExpPoly r(chart_);
    for (const auto& t : terms_)
        r.insert_term(t.amplitude.conjugate(), t.phase.conjugate());
    r.normalize();
    return r;
}

Cplx ExpPoly::evaluate(std::span<const Cplx> values) const {
    Cplx sum(0.0, 0.0);
    for (const auto& t : terms_)
        sum += t.amplitude.evaluate(values) * std::exp(t.phase.evaluate(values));
    return sum;
}

Cplx ExpPoly::evaluate_real(std::span<const double> values) const {
    std::vector<Cplx> v(values.begin(), values.end());
    return evaluate(v);
}

ExpPoly ExpPoly::substitute(const std::vector<Polynomial>& images,
                            const Chart& target) const {
    for (const auto& im : images)
        if (im.degree() > 1)
            throw std::invalid_argument(
                "exp-polynomial substitution requires affine images");
    ExpPoly r(target);
    for (const auto& t : terms_)
        r.insert_term(t.amplitude.substitute(images, target),
                      t.phase.substitute(images, target));
    r.normalize();
    return r;
}

ExpPoly ExpPoly::substitute_values(
    const std::vector<std::pair<std::string, Cplx>>& pins) const {
    ExpPoly r(chart_);
    for (const auto& t : terms_)
        r.insert_term(t.amplitude.substitute_values(pins),
                      t.phase.substitute_values(pins));
    r.normalize();
    return r;
}

std::string ExpPoly::to_text() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += " + ";
        if (t.phase.is_zero()) {
            out += t.amplitude.to_text();
        } else {
            out += "[" + t.amplitude.to_text() + "]*exp(" + t.phase.to_text() + ")";
        }
    }
    return out;
}

double ExpPoly::amplitude_norm() const {
    double m = 0.0;
    for (const auto& t : terms_)
        for (const auto& [e, c] : t.amplitude.terms()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace koopman
