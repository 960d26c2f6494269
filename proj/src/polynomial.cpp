#include "koopman/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "koopman/errors.hpp"

namespace koopman {

namespace {

const Cplx kZero(0.0, 0.0);

Cplx int_pow(Cplx base, int e) {
    Cplx r(1.0, 0.0);
    while (e-- > 0) r *= base;
    return r;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Polynomial Polynomial::constant(const Chart& chart, Cplx value) {
    Polynomial p(chart);
    p.add_term(MultiIndex(chart.dim(), 0), value);
    return p;
}

Polynomial Polynomial::coordinate(const Chart& chart, std::string_view name) {
    return coordinate(chart, chart.index(name));
}

Polynomial Polynomial::coordinate(const Chart& chart, int index) {
    if (index < 0 || index >= chart.dim())
        throw std::invalid_argument("polynomial: coordinate index out of range");
    MultiIndex e(chart.dim(), 0);
    e[index] = 1;
    return monomial(chart, std::move(e), Cplx(1.0, 0.0));
}

Polynomial Polynomial::monomial(const Chart& chart, MultiIndex exps, Cplx coeff) {
    if (static_cast<int>(exps.size()) != chart.dim())
        throw std::invalid_argument("polynomial: exponent vector length mismatch");
    for (int e : exps)
        if (e < 0) throw std::invalid_argument("polynomial: negative exponent");
    Polynomial p(chart);
    p.add_term(std::move(exps), coeff);
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return kNegInfDegree;
    // Graded order: the last stored term has maximal total degree.
    return total_degree(terms_.rbegin()->first);
}

Cplx Polynomial::coefficient(const MultiIndex& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? kZero : it->second;
}

Cplx Polynomial::constant_value() const {
    return coefficient(MultiIndex(chart_.dim(), 0));
}

void Polynomial::check_same_chart(const Polynomial& o) const {
    if (chart_ != o.chart_)
        throw ChartMismatchError("polynomial operands live on different charts");
}

void Polynomial::add_term(MultiIndex exps, Cplx coeff) {
    if (static_cast<int>(exps.size()) != chart_.dim())
        throw std::invalid_argument("polynomial: exponent vector length mismatch");
    auto [it, inserted] = terms_.emplace(std::move(exps), coeff);
    if (!inserted) it->second += coeff;
    if (it->second == kZero) terms_.erase(it);
}

Polynomial Polynomial::operator-() const {
    Polynomial r(chart_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_same_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_same_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    check_same_chart(o);
    Polynomial r(chart_);
    MultiIndex e(chart_.dim());
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < chart_.dim(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    terms_ = std::move(r.terms_);
    return *this;
}

Polynomial& Polynomial::operator*=(Cplx s) {
    if (s == kZero) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return chart_ == o.chart_ && terms_ == o.terms_;
}

Polynomial Polynomial::derivative(int coord) const {
    if (coord < 0 || coord >= chart_.dim())
        throw std::invalid_argument("polynomial: coordinate index out of range");
    Polynomial r(chart_);
    for (const auto& [e, c] : terms_) {
        if (e[coord] == 0) continue;
        MultiIndex d(e);
        d[coord] -= 1;
        r.add_term(std::move(d), c * static_cast<double>(e[coord]));
    }
    return r;
}

Polynomial Polynomial::derivative(std::string_view name) const {
    return derivative(chart_.index(name));
}

Polynomial Polynomial::conjugate() const {
    Polynomial r(chart_);
    MultiIndex e(chart_.dim());
    for (const auto& [ea, c] : terms_) {
        for (int i = 0; i < chart_.dim(); ++i) e[chart_.conjugate_index(i)] = ea[i];
        r.add_term(e, std::conj(c));
    }
    return r;
}

Cplx Polynomial::evaluate(std::span<const Cplx> values) const {
    if (static_cast<int>(values.size()) != chart_.dim())
        throw std::invalid_argument("polynomial: wrong number of point coordinates");
    Cplx sum = kZero;
    for (const auto& [e, c] : terms_) {
        Cplx t = c;
        for (int i = 0; i < chart_.dim(); ++i)
            if (e[i] != 0) t *= int_pow(values[i], e[i]);
        sum += t;
    }
    return sum;
}

Cplx Polynomial::evaluate_real(std::span<const double> values) const {
    std::vector<Cplx> v(values.begin(), values.end());
    return evaluate(v);
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images,
                                  const Chart& target) const {
    if (static_cast<int>(images.size()) != chart_.dim())
        throw std::invalid_argument("polynomial: one image per coordinate required");
    for (const auto& im : images)
        if (im.chart() != target)
            throw ChartMismatchError("substitution image on the wrong chart");

    // Cache powers of each image up to the largest exponent that occurs.
    std::vector<int> max_exp(chart_.dim(), 0);
    for (const auto& [e, c] : terms_)
        for (int i = 0; i < chart_.dim(); ++i) max_exp[i] = std::max(max_exp[i], e[i]);
    std::vector<std::vector<Polynomial>> powers(chart_.dim());
    for (int i = 0; i < chart_.dim(); ++i) {
        powers[i].push_back(Polynomial::constant(target, Cplx(1.0, 0.0)));
        for (int k = 1; k <= max_exp[i]; ++k)
            powers[i].push_back(powers[i].back() * images[i]);
    }

    Polynomial r(target);
    for (const auto& [e, c] : terms_) {
        Polynomial t = Polynomial::constant(target, c);
        for (int i = 0; i < chart_.dim(); ++i)
            if (e[i] != 0) t *= powers[i][e[i]];
        r += t;
    }
    return r;
}

Polynomial Polynomial::substitute_values(
    const std::vector<std::pair<std::string, Cplx>>& pins) const {
    std::vector<int> idx;
    std::vector<Cplx> val;
    for (const auto& [name, v] : pins) {
        idx.push_back(chart_.index(name));
        val.push_back(v);
    }
    Polynomial r(chart_);
    MultiIndex e(chart_.dim());
    for (const auto& [ea, c] : terms_) {
        e = ea;
        Cplx coeff = c;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (e[idx[j]] != 0) {
                coeff *= int_pow(val[j], e[idx[j]]);
                e[idx[j]] = 0;
            }
        }
        r.add_term(e, coeff);
    }
    return r;
}

std::string format_coefficient(Cplx c) {
    if (c.imag() == 0.0) return format_double(c.real());
    if (c.real() == 0.0) return format_double(c.imag()) + "i";
    std::string s = "(" + format_double(c.real());
    if (!(c.imag() < 0.0)) s += "+";
    s += format_double(c.imag()) + "i)";
    return s;
}

std::string monomial_text(const Chart& chart, const MultiIndex& exps) {
    std::string s;
    for (int i = 0; i < chart.dim(); ++i) {
        if (exps[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += chart.name(i);
        if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
    }
    return s.empty() ? "1" : s;
}

std::string Polynomial::to_text() const {
    if (terms_.empty()) return "0";
    std::string out;
    // Descending graded-lex reads naturally (leading term first).
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Cplx coeff = c;
        if (!out.empty()) {
            const bool negative_real = coeff.imag() == 0.0 && coeff.real() < 0.0;
            const bool negative_imag = coeff.real() == 0.0 && coeff.imag() < 0.0;
            if (negative_real || negative_imag) {
                out += " - ";
                coeff = -coeff;
            } else {
                out += " + ";
            }
        }
        std::string mono;
        for (int i = 0; i < chart_.dim(); ++i) {
            if (e[i] == 0) continue;
            mono += "*" + chart_.name(i) + "^" + std::to_string(e[i]);
        }
        if (mono.empty())
            out += format_coefficient(coeff);
        else if (coeff == Cplx(1.0, 0.0))
            out += mono.substr(1);
        else
            out += format_coefficient(coeff) + mono;
    }
    return out;
}

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g) {
    const Chart& chart = f.chart();
    if (chart != g.chart())
        throw ChartMismatchError("poisson bracket operands on different charts");
    if (chart.kind() != ChartKind::canonical)
        throw std::invalid_argument("poisson bracket requires a canonical chart");
    Polynomial r(chart);
    for (int k = 0; k < chart.pair_count(); ++k) {
        const int x = chart.base_index(k), p = chart.momentum_index(k);
        r += f.derivative(x) * g.derivative(p) - g.derivative(x) * f.derivative(p);
    }
    return r;
}

double max_coeff_distance(const Polynomial& a, const Polynomial& b) {
    if (a.chart() != b.chart())
        throw ChartMismatchError("coefficient distance across different charts");
    double m = 0.0;
    for (const auto& [e, c] : a.terms())
        m = std::max(m, std::abs(c - b.coefficient(e)));
    for (const auto& [e, c] : b.terms())
        m = std::max(m, std::abs(c - a.coefficient(e)));
    return m;
}

}  // namespace koopman
