#include "koopman/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "koopman/basis.hpp"
#include "koopman/gaussian.hpp"

namespace koopman {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

// Visit every v with 0 <= v_i <= a_i componentwise.
template <typename F>
void for_each_below(const MultiIndex& a, F&& visit) {
    MultiIndex v(a.size(), 0);
    while (true) {
        visit(v);
        std::size_t i = 0;
        while (i < v.size() && v[i] == a[i]) v[i++] = 0;
        if (i == v.size()) return;
        ++v[i];
    }
}

std::string deriv_text(const Chart& chart, const MultiIndex& d) {
    std::string out;
    for (int i = 0; i < chart.dim(); ++i) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += "D[" + chart.name(i) + "]";
        if (d[i] > 1) out += "^" + std::to_string(d[i]);
    }
    return out;
}

}  // namespace

QuantumOperator::QuantumOperator(Chart chart, double hbar)
    : chart_(std::move(chart)), hbar_(hbar) {
    if (hbar <= 0.0) throw std::invalid_argument("hbar must be positive");
}

QuantumOperator QuantumOperator::multiplication(const Polynomial& p, double hbar) {
    QuantumOperator op(p.chart(), hbar);
    op.add_term(MultiIndex(p.chart().dim(), 0), p);
    return op;
}

QuantumOperator QuantumOperator::derivative(const Chart& chart,
                                            std::string_view name, Cplx c,
                                            double hbar) {
    QuantumOperator op(chart, hbar);
    MultiIndex d(chart.dim(), 0);
    d[chart.index(name)] = 1;
    op.add_term(std::move(d), Polynomial::constant(chart, c));
    return op;
}

QuantumOperator QuantumOperator::momentum(const Chart& chart,
                                          std::string_view name, double hbar) {
    return derivative(chart, name, Cplx(0.0, -hbar), hbar);
}

int QuantumOperator::max_order() const {
    int order = 0;
    for (const auto& [d, c] : terms_) order = std::max(order, total_degree(d));
    return order;
}

void QuantumOperator::add_term(MultiIndex deriv, Polynomial coeff) {
    if (coeff.chart() != chart_)
        throw std::invalid_argument("coefficient chart mismatch");
    if (static_cast<int>(deriv.size()) != chart_.dim())
        throw std::invalid_argument("derivative index length mismatch");
    auto it = terms_.find(deriv);
    if (it == terms_.end()) {
        if (!coeff.is_zero()) terms_.emplace(std::move(deriv), std::move(coeff));
        return;
    }
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
}

Polynomial QuantumOperator::apply(const Polynomial& f) const {
    Polynomial out(chart_);
    for (const auto& [d, c] : terms_) {
        Polynomial g = f;
        for (int i = 0; i < chart_.dim() && !g.is_zero(); ++i)
            for (int r = 0; r < d[i]; ++r) g = g.derivative(i);
        out += c * g;
    }
    return out;
}

ExpPoly QuantumOperator::apply(const ExpPoly& f) const {
    ExpPoly out(chart_);
    for (const auto& [d, c] : terms_) {
        ExpPoly g = f;
        for (int i = 0; i < chart_.dim(); ++i)
            for (int r = 0; r < d[i]; ++r) g = g.derivative(i);
        out += g * c;
    }
    return out;
}

QuantumOperator QuantumOperator::compose(const QuantumOperator& o) const {
    if (chart_ != o.chart_) throw std::invalid_argument("operator chart mismatch");
    QuantumOperator out(chart_, hbar_);
    for (const auto& [a, c] : terms_) {
        for (const auto& [b, e] : o.terms_) {
            for_each_below(a, [&](const MultiIndex& v) {
                double binom = 1.0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    binom *= binomial(a[i], v[i]);
                Polynomial ev = e;
                for (std::size_t i = 0; i < v.size() && !ev.is_zero(); ++i)
                    for (int r = 0; r < v[i]; ++r)
                        ev = ev.derivative(static_cast<int>(i));
                if (ev.is_zero()) return;
                MultiIndex d(a.size());
                for (std::size_t i = 0; i < a.size(); ++i)
                    d[i] = a[i] - v[i] + b[i];
                out.add_term(std::move(d), (c * ev) * Cplx(binom, 0.0));
            });
        }
    }
    return out;
}

QuantumOperator QuantumOperator::operator+(const QuantumOperator& o) const {
    if (chart_ != o.chart_) throw std::invalid_argument("operator chart mismatch");
    QuantumOperator out = *this;
    for (const auto& [d, c] : o.terms_) out.add_term(d, c);
    return out;
}

QuantumOperator QuantumOperator::operator-(const QuantumOperator& o) const {
    return *this + o * Cplx(-1.0, 0.0);
}

QuantumOperator QuantumOperator::operator*(Cplx s) const {
    QuantumOperator out(chart_, hbar_);
    for (const auto& [d, c] : terms_) {
        Polynomial sc = c * s;
        if (!sc.is_zero()) out.add_term(d, std::move(sc));
    }
    return out;
}

bool QuantumOperator::operator==(const QuantumOperator& o) const {
    return chart_ == o.chart_ && terms_ == o.terms_;
}

std::string QuantumOperator::to_text() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [d, c] : terms_) {
        if (!out.empty()) out += " + ";
        const std::string dt = deriv_text(chart_, d);
        if (dt.empty()) {
            out += c.to_text();
        } else if (c.term_count() == 1 && c.constant_value() == Cplx(1.0, 0.0)) {
            out += dt;
        } else {
            out += "(" + c.to_text() + ")*" + dt;
        }
    }
    return out;
}

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b) {
    return a.compose(b) - b.compose(a);
}

std::optional<Cplx> verified_scalar(const QuantumOperator& op, int max_degree,
                                    double tol) {
    GradedBasis basis(op.chart(), max_degree);
    const Polynomial one = Polynomial::constant(op.chart(), 1.0);
    const Cplx scalar = op.apply(one).constant_value();
    for (int i = 0; i < basis.size(); ++i) {
        const Polynomial m = basis.monomial(i);
        const Polynomial residual = op.apply(m) - m * scalar;
        for (const auto& [exps, coeff] : residual.terms())
            if (std::abs(coeff) > tol) return std::nullopt;
    }
    return scalar;
}

// ---- model operators -------------------------------------------------------

QuantumOperator dilation_position(double c, double hbar) {
    const Chart chart = Chart::plain({"x"});
    const QuantumOperator xhat =
        QuantumOperator::multiplication(Polynomial::coordinate(chart, "x"), hbar);
    const QuantumOperator phat = QuantumOperator::momentum(chart, "x", hbar);
    return (xhat.compose(phat) + phat.compose(xhat)) * Cplx(-0.5 * c, 0.0);
}

QuantumOperator dilation_momentum(double c, double hbar) {
    const Chart chart = Chart::plain({"p"});
    const QuantumOperator phat =
        QuantumOperator::multiplication(Polynomial::coordinate(chart, "p"), hbar);
    const QuantumOperator xhat =
        QuantumOperator::derivative(chart, "p", Cplx(0.0, hbar), hbar);
    return (xhat.compose(phat) + phat.compose(xhat)) * Cplx(-0.5 * c, 0.0);
}

QuantumOperator bargmann_lowering(double hbar) {
    return QuantumOperator::derivative(Chart::plain({"z"}), "z", 1.0, hbar);
}

QuantumOperator bargmann_raising(double hbar) {
    const Chart chart = Chart::plain({"z"});
    return QuantumOperator::multiplication(Polynomial::coordinate(chart, "z"),
                                           hbar);
}

QuantumOperator bargmann_oscillator(double omega, double hbar) {
    const QuantumOperator number =
        bargmann_raising(hbar).compose(bargmann_lowering(hbar));
    const Chart& chart = number.chart();
    const QuantumOperator half = QuantumOperator::multiplication(
        Polynomial::constant(chart, 0.5), hbar);
    return (number + half) * Cplx(hbar * omega, 0.0);
}

PlanarLadders planar_ladders(double hbar) {
    const Chart chart = Chart::plain({"x", "y"});
    const double s = 1.0 / std::sqrt(2.0);
    const QuantumOperator x =
        QuantumOperator::multiplication(Polynomial::coordinate(chart, "x"), hbar);
    const QuantumOperator y =
        QuantumOperator::multiplication(Polynomial::coordinate(chart, "y"), hbar);
    const QuantumOperator dx = QuantumOperator::derivative(chart, "x", 1.0, hbar);
    const QuantumOperator dy = QuantumOperator::derivative(chart, "y", 1.0, hbar);
    PlanarLadders out{
        (x + dy) * Cplx(s, 0.0),
        (x - dy) * Cplx(s, 0.0),
        (y + dx) * Cplx(s, 0.0),
        (y - dx) * Cplx(s, 0.0),
    };
    return out;
}

QuantumOperator planar_hamiltonian(double omega, double gamma, double hbar) {
    const PlanarLadders l = planar_ladders(hbar);
    const Cplx alpha(omega, -gamma);
    const QuantumOperator coupling = l.a2_raise.compose(l.a1) * (Cplx(hbar, 0.0) * alpha) +
                                     l.a1_raise.compose(l.a2) * (Cplx(hbar, 0.0) * std::conj(alpha));
    const QuantumOperator shift = QuantumOperator::multiplication(
        Polynomial::constant(l.a1.chart(), Cplx(hbar * omega, 0.0)), hbar);
    return coupling + shift;
}

QuantumOperator planar_hamiltonian_direct(double omega, double gamma, double hbar) {
    const Chart chart = Chart::plain({"x", "y"});
    QuantumOperator h(chart, hbar);
    const Polynomial x = Polynomial::coordinate(chart, "x");
    const Polynomial y = Polynomial::coordinate(chart, "y");
    h.add_term({0, 0}, (x * y) * Cplx(hbar * omega, 0.0));
    h.add_term({1, 1}, Polynomial::constant(chart, Cplx(-hbar * omega, 0.0)));
    h.add_term({0, 1}, y * Cplx(0.0, -hbar * gamma));
    h.add_term({1, 0}, x * Cplx(0.0, hbar * gamma));
    return h;
}

QuantumOperator holomorphic_hamiltonian(double omega, double gamma, double hbar) {
    const Chart chart = Chart::plain({"z1", "z2"});
    const Cplx alpha(omega, -gamma);
    QuantumOperator h(chart, hbar);
    h.add_term({1, 0}, Polynomial::coordinate(chart, "z1") * (alpha * hbar));
    h.add_term({0, 1},
               Polynomial::coordinate(chart, "z2") * (std::conj(alpha) * hbar));
    h.add_term({0, 0}, Polynomial::constant(chart, Cplx(hbar * omega, 0.0)));
    return h;
}

// ---- spectra and eigenfunction checks --------------------------------------

namespace {

// Reads c from op(m) = c m, demanding an exact monomial multiple.
Cplx monomial_eigenvalue(const QuantumOperator& op, const Polynomial& m) {
    const Polynomial image = op.apply(m);
    const auto& exps = m.terms().begin()->first;
    const Cplx c = image.coefficient(exps) / m.coefficient(exps);
    if (!(image - m * c).is_zero())
        throw std::runtime_error("operator is not diagonal on " +
                                 m.to_text());
    return c;
}

void sort_entries(SpectrumReport& report) {
    std::sort(report.entries.begin(), report.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                  if (a.value.real() != b.value.real())
                      return a.value.real() < b.value.real();
                  return a.value.imag() < b.value.imag();
              });
}

}  // namespace

SpectrumReport dilation_spectrum(bool position_rep, int max_degree, double c,
                                 double hbar) {
    const QuantumOperator h =
        position_rep ? dilation_position(c, hbar) : dilation_momentum(c, hbar);
    SpectrumReport report;
    report.system = "damped-toy";
    report.max_degree = max_degree;
    report.method = position_rep ? "quantum-position" : "quantum-momentum";
    report.basis_size = max_degree + 1;
    for (int n = 0; n <= max_degree; ++n) {
        const Polynomial m = Polynomial::monomial(h.chart(), {n}, 1.0);
        SpectrumEntry entry;
        entry.value = monomial_eigenvalue(h, m);
        entry.multiplicity = 1;
        entry.labels = {monomial_text(h.chart(), {n})};
        report.entries.push_back(std::move(entry));
    }
    sort_entries(report);
    return report;
}

SpectrumReport bargmann_spectrum(int max_degree, double omega, double hbar) {
    const QuantumOperator h = bargmann_oscillator(omega, hbar);
    SpectrumReport report;
    report.system = "harmonic";
    report.max_degree = max_degree;
    report.method = "quantum-bargmann";
    report.basis_size = max_degree + 1;
    for (int n = 0; n <= max_degree; ++n) {
        const Polynomial m = Polynomial::monomial(h.chart(), {n}, 1.0);
        SpectrumEntry entry;
        entry.value = monomial_eigenvalue(h, m);
        entry.multiplicity = 1;
        entry.labels = {monomial_text(h.chart(), {n})};
        report.entries.push_back(std::move(entry));
    }
    sort_entries(report);
    return report;
}

SpectrumReport planar_spectrum(int max_degree, double omega, double gamma,
                               double hbar) {
    SpectrumReport report;
    report.system = "damped-oscillator";
    report.max_degree = max_degree;
    report.method = "quantum-ccr";
    report.basis_size = (max_degree + 1) * (max_degree + 1);
    std::map<std::pair<double, double>, SpectrumEntry> merged;
    for (int n = 0; n <= max_degree; ++n) {
        for (int k = 0; k <= max_degree; ++k) {
            const EigencheckResult check = planar_eigencheck(n, k, omega, gamma, hbar);
            // Bitwise zero on dyadic parameters; roundoff slack otherwise.
            const double slack = 1e-10 * std::max(1.0, std::abs(check.eigenvalue)) *
                                 check.eigenfunction.amplitude_norm();
            if (check.residual.amplitude_norm() > slack)
                throw std::runtime_error("ladder state failed the eigencheck");
            auto key = std::make_pair(check.eigenvalue.real(), check.eigenvalue.imag());
            SpectrumEntry& entry = merged[key];
            entry.value = check.eigenvalue;
            entry.multiplicity += 1;
            entry.labels.push_back("phi(" + std::to_string(n) + "," +
                                   std::to_string(k) + ")");
        }
    }
    for (auto& [key, entry] : merged) report.entries.push_back(std::move(entry));
    sort_entries(report);
    return report;
}

EigencheckResult planar_eigencheck(int n, int k, double omega, double gamma,
                                   double hbar) {
    if (n < 0 || k < 0) throw std::invalid_argument("ladder indices must be >= 0");
    const Chart chart = Chart::plain({"x", "y"});
    const Polynomial x = Polynomial::coordinate(chart, "x");
    const Polynomial y = Polynomial::coordinate(chart, "y");

    QuantumOperator raise_n(chart, hbar);  // y - d/dx, the -i gamma ladder
    raise_n.add_term({0, 0}, y);
    raise_n.add_term({1, 0}, Polynomial::constant(chart, -1.0));
    QuantumOperator raise_k(chart, hbar);  // x - d/dy
    raise_k.add_term({0, 0}, x);
    raise_k.add_term({0, 1}, Polynomial::constant(chart, -1.0));

    ExpPoly phi = ExpPoly::dressed(Polynomial::constant(chart, 1.0), -(x * y));
    for (int j = 0; j < k; ++j) phi = raise_k.apply(phi);
    for (int j = 0; j < n; ++j) phi = raise_n.apply(phi);

    const QuantumOperator h = planar_hamiltonian_direct(omega, gamma, hbar);
    EigencheckResult out;
    out.eigenvalue = Cplx(hbar * omega * (n + k + 1), -hbar * gamma * (n - k));
    out.residual = h.apply(phi) - phi * out.eigenvalue;
    out.eigenfunction = std::move(phi);
    return out;
}

EigencheckResult holomorphic_eigencheck(int n, int k, double omega, double gamma,
                                        double hbar) {
    if (n < 0 || k < 0) throw std::invalid_argument("ladder indices must be >= 0");
    const QuantumOperator h = holomorphic_hamiltonian(omega, gamma, hbar);
    const Polynomial m = Polynomial::monomial(h.chart(), {n, k}, 1.0);
    EigencheckResult out;
    out.eigenvalue = Cplx(hbar * omega * (n + k + 1), -hbar * gamma * (n - k));
    out.eigenfunction = ExpPoly::of(m);
    out.residual = ExpPoly::of(h.apply(m) - m * out.eigenvalue);
    return out;
}

Cplx bargmann_pairing(const Polynomial& f, const Polynomial& g) {
    const Chart& chart = f.chart();
    if (chart != g.chart()) throw std::invalid_argument("chart mismatch");
    if (chart.kind() != ChartKind::plain || chart.dim() != 1)
        throw std::invalid_argument(
            "bargmann_pairing expects holomorphic polynomials in one variable");
    Cplx out = 0.0;
    for (const auto& [fe, fc] : f.terms())
        for (const auto& [ge, gc] : g.terms())
            out += std::conj(fc) * gc * gaussian_moment(ge[0], fe[0]);
    return out;
}

PlaneWaveCheck plane_wave_eigencheck(Cplx z, double hbar) {
    const Chart chart = Chart::plain({"x"});
    const QuantumOperator p = QuantumOperator::momentum(chart, "x", hbar);
    const Polynomial x = Polynomial::coordinate(chart, "x");

    PlaneWaveCheck out;
    const ExpPoly plus = ExpPoly::dressed(Polynomial::constant(chart, 1.0),
                                          x * (Cplx(0.0, 1.0) * z / hbar));
    out.eigenvalue_plus = z;
    out.residual_plus = (p.apply(plus) - plus * out.eigenvalue_plus).amplitude_norm();

    const ExpPoly minus = ExpPoly::dressed(Polynomial::constant(chart, 1.0),
                                           x * (Cplx(0.0, -1.0) * z));
    out.eigenvalue_minus = -hbar * z;
    out.residual_minus =
        (p.apply(minus) - minus * out.eigenvalue_minus).amplitude_norm();
    return out;
}

// ---- classical / quantum correspondence ------------------------------------

std::vector<CorrespondenceRow> correspondence_table(int max_index, double omega,
                                                    double gamma, double hbar) {
    std::vector<CorrespondenceRow> rows;
    const Chart zchart = Chart::conjugate_pairs({{"z", "zbar"}});
    const Chart bargmann = Chart::plain({"z"});
    for (int n = 0; n <= max_index; ++n) {
        CorrespondenceRow fwd;
        fwd.family = "oscillator";
        fwd.classical = monomial_text(zchart, {0, n}) + " * exp(-z*zbar/2)";
        fwd.quantum = monomial_text(bargmann, {n});
        fwd.classical_eigenvalue = Cplx(-omega * n, 0.0);
        fwd.quantum_eigenvalue = Cplx(hbar * omega * (n + 0.5), 0.0);
        rows.push_back(std::move(fwd));

        CorrespondenceRow bwd;
        bwd.family = "oscillator";
        bwd.classical = monomial_text(zchart, {n, 0}) + " * exp(-z*zbar/2)";
        bwd.quantum = "conj(" + monomial_text(bargmann, {n}) + ")";
        bwd.classical_eigenvalue = Cplx(omega * n, 0.0);
        bwd.quantum_eigenvalue = Cplx(hbar * omega * (n + 0.5), 0.0);
        rows.push_back(std::move(bwd));
    }
    const Chart toy = Chart::canonical({"x"}, {"p"});
    for (int n = 0; n <= max_index; ++n) {
        CorrespondenceRow xrow;
        xrow.family = "dilation";
        xrow.classical = monomial_text(toy, {n, 0});
        xrow.quantum = xrow.classical;
        xrow.classical_eigenvalue = Cplx(0.0, -gamma * n);
        xrow.quantum_eigenvalue = Cplx(0.0, hbar * gamma * (n + 0.5));
        rows.push_back(std::move(xrow));

        CorrespondenceRow prow;
        prow.family = "dilation";
        prow.classical = monomial_text(toy, {0, n});
        prow.quantum = prow.classical;
        prow.classical_eigenvalue = Cplx(0.0, gamma * n);
        prow.quantum_eigenvalue = Cplx(0.0, -hbar * gamma * (n + 0.5));
        rows.push_back(std::move(prow));
    }
    const Cplx alpha(omega, -gamma);
    const Chart holo = Chart::plain({"z1", "z2"});
    for (int n = 0; n <= max_index; ++n) {
        for (int k = 0; k <= max_index; ++k) {
            CorrespondenceRow row;
            row.family = "spiral-sink";
            row.classical = monomial_text(holo, {n, k});
            row.quantum = row.classical;
            row.classical_eigenvalue =
                alpha * static_cast<double>(n) + std::conj(alpha) * static_cast<double>(k);
            row.quantum_eigenvalue =
                hbar * (row.classical_eigenvalue + Cplx(omega, 0.0));
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace koopman
